#include <algorithm>
#include <limits>
#include <map>
#include <cmath>
#include <numbers>
#include <optional>

#include "robin/error.hpp"
#include "robin/geometry.hpp"
#include "predicates.hpp"

namespace robin {

namespace {

Point2 unit(Point2 v) { return (1.0 / norm(v)) * v; }

std::ptrdiff_t sidx(std::size_t i) { return static_cast<std::ptrdiff_t>(i); }

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> convex_corners(const GeneralizedPolygon& P) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t c = 0; c < P.components().size(); ++c) {
    const auto& w = P.components()[c].walk;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Point2 a = w.vertex(sidx(i) - 1), b = w[i], d = w.vertex(sidx(i) + 1);
      if (orient(a, b, d) > P.tolerance() * distance(a, d)) out.emplace_back(c, i);
    }
  }
  return out;
}

CutResult cut_corner(const GeneralizedPolygon& P, std::size_t component, std::size_t vertex, double epsilon,
                     CutSide side) {
  if (component >= P.components().size()) throw Error(ErrorKind::InvalidCut, "component index out of range");
  const auto& comp = P.components()[component];
  const auto& walk = comp.walk;
  if (vertex >= walk.size()) throw Error(ErrorKind::InvalidCut, "vertex index out of range");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidCut, "epsilon must be positive");
  const double tol = P.tolerance();

  const Point2 v = walk[vertex];
  const Point2 prev = walk.vertex(sidx(vertex) - 1);
  const Point2 next = walk.vertex(sidx(vertex) + 1);
  if (!(orient(prev, v, next) > tol * distance(prev, next)))
    throw Error(ErrorKind::InvalidCut, "vertex " + std::to_string(vertex) + " is not a convex corner");

  const Point2 e1 = unit(prev - v);
  const Point2 e2 = unit(next - v);
  const Point2 d = unit(e1 + e2);

  // Crack leaving the walk at the corner turns it into a double-multiplicity corner.
  std::optional<std::size_t> crack_at;
  for (std::size_t k = 0; k < comp.cracks.size(); ++k) {
    if (distance(comp.cracks[k].polyline.front(), v) <= tol) {
      crack_at = k;
      break;
    }
  }

  const auto hit = [&](Point2 dir, double max_len) {
    const double t = epsilon / dot(dir, d);
    if (!(dot(dir, d) > 0.0) || !(t < max_len - tol))
      throw Error(ErrorKind::InvalidCut, "epsilon too large: cut line leaves the incident sides");
    return v + t * dir;
  };

  std::vector<Point2> new_walk;
  std::vector<Crack> cracks = comp.cracks;
  CutResult res;
  res.corner = v;
  res.depth_axis = d;

  const auto emit_walk = [&](std::initializer_list<Point2> replacement) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i == vertex) {
        new_walk.insert(new_walk.end(), replacement.begin(), replacement.end());
      } else {
        new_walk.push_back(walk[i]);
      }
    }
  };

  if (!crack_at) {
    const Point2 a = hit(e1, distance(prev, v));
    const Point2 b = hit(e2, distance(next, v));
    emit_walk({a, b});
    res.sigma_length = distance(a, b);
    res.s_length = distance(a, v) + distance(v, b);
  } else {
    auto& crack = cracks[*crack_at];
    const Point2 c = unit(crack.polyline[1] - v);
    if (!(orient(v, next, v + c) > 0.0 && orient(v, v + c, prev) > 0.0))
      throw Error(ErrorKind::InvalidCut, "crack at the corner does not enter the corner");
    const Point2 on_crack = hit(c, distance(crack.polyline[1], v));
    // Region {x . nu > 0}, nu the left normal of the crack, is the wedge next to `prev`.
    if (side == CutSide::AlphaPlus) {
      const Point2 a = hit(e1, distance(prev, v));
      emit_walk({a, on_crack, v});
      res.sigma_length = distance(a, on_crack);
      res.s_length = distance(a, v) + distance(v, on_crack);
    } else {
      const Point2 b = hit(e2, distance(next, v));
      emit_walk({v, on_crack, b});
      res.sigma_length = distance(on_crack, b);
      res.s_length = distance(on_crack, v) + distance(v, b);
    }
    crack.polyline.front() = on_crack;
  }
  res.removed_triangle_area = 0.5 * epsilon * res.sigma_length;
  res.geometric_ratio = res.s_length / res.sigma_length;

  std::vector<Component> comps = P.components();
  try {
    comps[component] = Component{SimplePolygon(std::move(new_walk)), std::move(cracks)};
    res.cut_polygon = GeneralizedPolygon(std::move(comps), P.side_budget() + 1, P.name() + "_cut");
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidCut, std::string("epsilon too large: ") + e.what());
  }
  return res;
}

// ---------------------------------------------------------------------------
// Hole filling.

namespace {

struct VertexPool {
  std::vector<Point2> pts;
  double tol;
  std::size_t id(Point2 p) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (distance(pts[i], p) <= tol) return i;
    }
    pts.push_back(p);
    return pts.size() - 1;
  }
};

std::vector<Point2> drop_collinear(std::vector<Point2> loop, double tol) {
  bool changed = true;
  while (changed && loop.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Point2 a = loop[(i + loop.size() - 1) % loop.size()], b = loop[i], c = loop[(i + 1) % loop.size()];
      if (std::abs(orient(a, b, c)) <= tol * distance(a, c) && dot(b - a, c - b) > 0.0) {
        loop.erase(loop.begin() + sidx(i));
        changed = true;
        break;
      }
    }
  }
  return loop;
}

double loop_area(const std::vector<Point2>& v) {
  double a2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a2 += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a2;
}

}  // namespace

GeneralizedPolygon fill_holes(const GeneralizedPolygon& P) {
  if (P.components().size() == 1) {
    return GeneralizedPolygon({Component{P.components()[0].walk, {}}}, P.side_budget(), P.name() + "_filled");
  }
  const double tol = 1e-9 * P.diameter();
  VertexPool pool{{}, tol};
  std::vector<Point2> all;
  for (const auto& c : P.components()) {
    for (const auto& p : c.walk.vertices()) all.push_back(p);
  }
  // Directed edges split at every vertex lying on them; shared edges walked
  // in opposite directions cancel.
  std::multimap<std::pair<std::size_t, std::size_t>, int> edges;
  for (const auto& c : P.components()) {
    const auto& w = c.walk.vertices();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Point2 a = w[i], b = w[(i + 1) % w.size()];
      std::vector<double> ts{0.0, 1.0};
      for (const auto& p : all) {
        if (distance(p, a) <= tol || distance(p, b) <= tol) continue;
        if (point_segment_distance(p, a, b) <= tol) ts.push_back(dot(p - a, b - a) / dot(b - a, b - a));
      }
      std::sort(ts.begin(), ts.end());
      for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const std::size_t u = pool.id(a + ts[k] * (b - a)), v = pool.id(a + ts[k + 1] * (b - a));
        if (u == v) continue;
        auto rev = edges.find({v, u});
        if (rev != edges.end()) {
          edges.erase(rev);
        } else {
          edges.insert({{u, v}, 0});
        }
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> outgoing;
  for (const auto& [e, _] : edges) outgoing[e.first].push_back(e.second);
  std::map<std::pair<std::size_t, std::size_t>, bool> used;

  std::vector<std::vector<Point2>> outer;
  for (const auto& [e, _] : edges) {
    if (used[e]) continue;
    std::vector<Point2> loop;
    std::size_t u = e.first, v = e.second;
    used[{u, v}] = true;
    loop.push_back(pool.pts[u]);
    for (std::size_t guard = 0; v != e.first && guard < edges.size() + 1; ++guard) {
      loop.push_back(pool.pts[v]);
      // First outgoing edge met rotating clockwise from the reversed incoming edge.
      const Point2 r = pool.pts[u] - pool.pts[v];
      std::size_t best = std::numeric_limits<std::size_t>::max();
      double best_cw = std::numeric_limits<double>::infinity();
      for (std::size_t w : outgoing[v]) {
        if (used[{v, w}]) continue;
        const Point2 d = pool.pts[w] - pool.pts[v];
        double cw = -std::atan2(cross(r, d), dot(r, d));
        if (cw <= 0.0) cw += 2.0 * std::numbers::pi;
        if (cw < best_cw) {
          best_cw = cw;
          best = w;
        }
      }
      if (best == std::numeric_limits<std::size_t>::max()) throw Error(ErrorKind::InvalidPolygon, "open boundary loop while filling holes");
      used[{v, best}] = true;
      u = v;
      v = best;
    }
    loop = drop_collinear(std::move(loop), tol);
    if (loop.size() >= 3 && loop_area(loop) > 0.0) outer.push_back(std::move(loop));
  }

  std::vector<Component> comps;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    SimplePolygon candidate(outer[i]);
    const Point2 probe = candidate.interior_point();
    bool nested = false;
    for (std::size_t j = 0; j < outer.size() && !nested; ++j) {
      if (j == i) continue;
      if (SimplePolygon(outer[j]).contains(probe) && loop_area(outer[j]) > loop_area(outer[i])) nested = true;
    }
    if (!nested) comps.push_back(Component{std::move(candidate), {}});
  }
  return GeneralizedPolygon(std::move(comps), P.side_budget(), P.name() + "_filled");
}

// ---------------------------------------------------------------------------
// Crack detachment.

namespace {

// Opens one crack rooted on the walk into a notch on the side of the walk
// edge preceding the root.
std::vector<Point2> open_crack(const std::vector<Point2>& walk, const Crack& crack, double epsilon, double tol) {
  const Point2 root = crack.polyline.front();
  const std::size_t n = walk.size();
  std::optional<std::size_t> at_vertex, on_edge;
  for (std::size_t i = 0; i < n && !at_vertex; ++i) {
    if (distance(walk[i], root) <= tol) at_vertex = i;
  }
  if (!at_vertex) {
    for (std::size_t i = 0; i < n && !on_edge; ++i) {
      if (point_segment_distance(root, walk[i], walk[(i + 1) % n]) <= tol) on_edge = i;
    }
  }
  if (!at_vertex && !on_edge) throw Error(ErrorKind::InvalidParameter, "crack root not found on the walk");
  const Point2 pred = at_vertex ? walk[(*at_vertex + n - 1) % n] : walk[*on_edge];

  const auto& c = crack.polyline;
  std::vector<Point2> notch;
  Point2 back = pred;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const double room = distance(back, c[i]);
    if (!(epsilon < room - tol)) throw Error(ErrorKind::InvalidParameter, "epsilon too large to detach the crack");
    const Point2 moved = c[i] + epsilon * unit(back - c[i]);
    notch.push_back(moved);
    back = moved;
  }
  for (std::size_t i = c.size(); i-- > 0;) notch.push_back(c[i]);

  std::vector<Point2> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (at_vertex && i == *at_vertex) {
      out.insert(out.end(), notch.begin(), notch.end());
      continue;
    }
    out.push_back(walk[i]);
    if (on_edge && i == *on_edge) out.insert(out.end(), notch.begin(), notch.end());
  }
  return out;
}

struct SharedEdge {
  std::size_t ci, ei, cj, ej;
};

std::optional<SharedEdge> find_shared_edge(const std::vector<std::vector<Point2>>& walks, double tol) {
  for (std::size_t ci = 0; ci < walks.size(); ++ci) {
    for (std::size_t cj = ci + 1; cj < walks.size(); ++cj) {
      const auto& A = walks[ci];
      const auto& B = walks[cj];
      for (std::size_t a = 0; a < A.size(); ++a) {
        for (std::size_t b = 0; b < B.size(); ++b) {
          const Point2 p = A[a], q = A[(a + 1) % A.size()], r = B[b], s = B[(b + 1) % B.size()];
          if (!detail::collinear_overlap(p, q, r, s, tol).empty() && dot(q - p, s - r) < 0.0) return SharedEdge{ci, a, cj, b};
        }
      }
    }
  }
  return std::nullopt;
}

// Shifts edge (k, k+1) of `w` inward by epsilon, sliding its endpoints along
// the neighbouring edges.
void offset_edge(std::vector<Point2>& w, std::size_t k, double epsilon, double tol) {
  const std::size_t n = w.size();
  const Point2 p = w[k], q = w[(k + 1) % n];
  const Point2 pp = w[(k + n - 1) % n], qn = w[(k + 2) % n];
  const Point2 u = unit(q - p);
  const Point2 inward{-u.y, u.x};
  const auto slide = [&](Point2 from, Point2 to) {
    // Point on segment from->to at depth epsilon from the edge line.
    const double depth = dot(to - from, inward);
    if (!(depth > tol)) throw Error(ErrorKind::InvalidParameter, "cannot offset shared edge: neighbour not inward");
    const double t = epsilon / depth;
    if (!(t < 1.0)) throw Error(ErrorKind::InvalidParameter, "epsilon too large to detach shared edge");
    return from + t * (to - from);
  };
  w[k] = slide(p, pp);
  w[(k + 1) % n] = slide(q, qn);
}

}  // namespace

GeneralizedPolygon detach_cracks(const GeneralizedPolygon& P, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidParameter, "epsilon must be positive");
  const double tol = P.tolerance();
  std::vector<std::vector<Point2>> walks;
  for (const auto& comp : P.components()) {
    std::vector<Point2> w = comp.walk.vertices();
    for (const auto& crack : comp.cracks) {
      if (!comp.walk.on_boundary(crack.polyline.front(), tol))
        throw Error(ErrorKind::InvalidParameter, "detaching cracks rooted on other cracks is not supported");
      for (std::size_t i = 1; i < crack.polyline.size(); ++i) {
        if (comp.walk.on_boundary(crack.polyline[i], tol))
          throw Error(ErrorKind::InvalidParameter, "detaching cracks running along the walk is not supported");
      }
      w = open_crack(w, crack, epsilon, tol);
    }
    walks.push_back(std::move(w));
  }

  // Edges shared by two components: shift the shorter one when nested,
  // otherwise rotate the overlapping one about its far vertex.
  for (std::size_t guard = 0; guard < 64; ++guard) {
    const auto shared = find_shared_edge(walks, tol);
    if (!shared) break;
    auto& A = walks[shared->ci];
    auto& B = walks[shared->cj];
    const Point2 p = A[shared->ei], q = A[(shared->ei + 1) % A.size()];
    const Point2 r = B[shared->ej], s = B[(shared->ej + 1) % B.size()];
    const auto inside = [&](Point2 x, Point2 a, Point2 b) { return point_segment_distance(x, a, b) <= tol; };
    if (inside(r, p, q) && inside(s, p, q)) {
      offset_edge(B, shared->ej, epsilon, tol);
    } else if (inside(p, r, s) && inside(q, r, s)) {
      offset_edge(A, shared->ei, epsilon, tol);
    } else {
      // Partial overlap: the endpoint of A's edge inside B's edge moves along
      // A's other edge at that vertex.
      const std::size_t n = A.size();
      if (inside(q, r, s)) {
        const std::size_t k = (shared->ei + 1) % n;
        A[k] = A[k] + epsilon * unit(A[(k + 1) % n] - A[k]);
      } else {
        const std::size_t k = shared->ei;
        A[k] = A[k] + epsilon * unit(A[(k + n - 1) % n] - A[k]);
      }
    }
  }

  try {
    std::vector<Component> comps;
    for (auto& w : walks) comps.push_back(Component{SimplePolygon(std::move(w)), {}});
    const int budget = std::max(P.side_budget(), 4 * static_cast<int>(P.side_budget() + comps.size()));
    GeneralizedPolygon loose(comps, budget);
    return GeneralizedPolygon(std::move(comps), std::max(P.side_budget(), side_count(loose)), P.name() + "_detached");
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidParameter, std::string("epsilon too large to keep simplicity: ") + e.what());
  }
}

}  // namespace robin
