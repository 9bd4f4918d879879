#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>

#include "delaunay.hpp"
#include "robin/error.hpp"
#include "edge_key.hpp"
#include "robin/mesh.hpp"

namespace robin {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool on_any(Point2 p, const std::vector<Segment>& segs, double tol) {
  for (const auto& s : segs)
    if (point_segment_distance(p, s.a, s.b) <= tol) return true;
  return false;
}

struct ComponentMesh {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;
};

// Conforming triangulation of one component, before seam duplication.
ComponentMesh mesh_component(const Component& comp, const std::vector<Segment>& cracks,
                             const std::vector<Point2>& singular, double h, const MeshOptions& opt, double tol) {
  const auto& w = comp.walk.vertices();
  std::vector<Point2> pts;
  const auto intern = [&](Point2 p) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (distance(pts[i], p) <= tol) return static_cast<int>(i);
    pts.push_back(p);
    return static_cast<int>(pts.size()) - 1;
  };
  std::vector<std::array<int, 2>> raw;
  for (std::size_t i = 0; i < w.size(); ++i) raw.push_back({intern(w[i]), intern(w[(i + 1) % w.size()])});
  for (const auto& s : cracks) raw.push_back({intern(s.a), intern(s.b)});

  // Every PSLG vertex lying on a segment splits it; then pre-split to h.
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<Point2, Point2>> pieces;
  for (const auto& [ia, ib] : raw) {
    const Point2 a = pts[ia], b = pts[ib];
    std::vector<double> ts{0.0, 1.0};
    const Point2 d = b - a;
    const double l2 = dot(d, d);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (static_cast<int>(k) == ia || static_cast<int>(k) == ib) continue;
      if (point_segment_distance(pts[k], a, b) > tol) continue;
      const double t = dot(pts[k] - a, d) / l2;
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const Point2 p = a + ts[k] * d, q = a + ts[k + 1] * d;
      const auto key = detail::edge_key(intern(p), intern(q));
      if (key.first == key.second || !seen.insert(key).second) continue;
      pieces.emplace_back(p, q);
    }
  }

  BoundingBox box = comp.walk.bbox();
  detail::ConformingDelaunay cdt(box);
  for (const auto& [p, q] : pieces) {
    const double len = distance(p, q);
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / h - 1e-9)));
    int prev = cdt.add_input_vertex(p);
    for (std::size_t k = 1; k <= n; ++k) {
      const Point2 r = k == n ? q : p + (static_cast<double>(k) / n) * (q - p);
      const int cur = cdt.add_input_vertex(r);
      cdt.add_segment(prev, cur);
      prev = cur;
    }
  }

  const double g = std::clamp(opt.corner_grading, 1e-3, 1.0);
  const double radius = opt.grading_radius * h;
  detail::ConformingDelaunay::Quality q;
  q.min_angle_rad = opt.min_angle_deg * std::numbers::pi / 180.0;
  q.max_vertices = opt.max_nodes;
  q.inside = [&comp](Point2 p) { return comp.walk.contains(p); };
  if (g >= 1.0 || singular.empty()) {
    q.size = [h](Point2) { return h; };
  } else {
    q.size = [h, g, radius, &singular](Point2 p) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& s : singular) d = std::min(d, distance(p, s));
      return h * std::min(1.0, g + (1.0 - g) * d / radius);
    };
  }
  cdt.refine(q);
  if (!cdt.segments_present()) throw Error(ErrorKind::MeshingFailure, "boundary segments were not recovered");

  ComponentMesh out;
  const auto& P = cdt.points();
  std::vector<int> remap(P.size(), -1);
  for (const auto& t : cdt.triangles()) {
    const Point2 c = (1.0 / 3.0) * (P[t[0]] + P[t[1]] + P[t[2]]);
    if (!comp.walk.contains(c)) continue;
    std::array<int, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      if (remap[t[k]] < 0) {
        remap[t[k]] = static_cast<int>(out.nodes.size());
        out.nodes.push_back(P[t[k]]);
      }
      tri[k] = remap[t[k]];
    }
    out.triangles.push_back(tri);
  }
  if (out.triangles.empty()) throw Error(ErrorKind::MeshingFailure, "component produced no triangles");
  return out;
}

std::vector<Point2> singular_points(const Component& comp, const std::vector<Segment>& cracks) {
  std::vector<Point2> out;
  const auto& w = comp.walk;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto ip = static_cast<std::ptrdiff_t>(i);
    if (orient(w.vertex(ip - 1), w.vertex(ip), w.vertex(ip + 1)) < 0.0) out.push_back(w.vertex(ip));
  }
  for (const auto& s : cracks) {
    out.push_back(s.a);
    out.push_back(s.b);
  }
  return out;
}

// Splits every node whose fan is cut by crack edges into one copy per side.
void duplicate_seams(TriMesh& mesh, std::size_t node_begin, std::size_t tri_begin,
                     const std::vector<Segment>& cracks, double tol) {
  if (cracks.empty()) return;
  const auto is_crack = [&](int a, int b) {
    return on_any(0.5 * (mesh.nodes[a] + mesh.nodes[b]), cracks, tol) && on_any(mesh.nodes[a], cracks, tol) &&
           on_any(mesh.nodes[b], cracks, tol);
  };
  const std::size_t n_end = mesh.nodes.size();
  std::vector<std::vector<int>> fan(n_end - node_begin);
  for (std::size_t t = tri_begin; t < mesh.triangles.size(); ++t)
    for (int v : mesh.triangles[t]) fan[v - node_begin].push_back(static_cast<int>(t));

  for (std::size_t v = node_begin; v < n_end; ++v) {
    const auto& f = fan[v - node_begin];
    if (!on_any(mesh.nodes[v], cracks, tol)) continue;
    // Triangles around v sharing a non-crack edge (v, u) lie on the same side.
    std::map<int, std::vector<std::size_t>> by_other;
    for (std::size_t k = 0; k < f.size(); ++k)
      for (int u : mesh.triangles[f[k]])
        if (u != static_cast<int>(v)) by_other[u].push_back(k);
    UnionFind uf(f.size());
    for (const auto& [u, ks] : by_other)
      if (ks.size() == 2 && !is_crack(static_cast<int>(v), u)) uf.unite(static_cast<int>(ks[0]), static_cast<int>(ks[1]));
    std::map<int, int> copy_of_root;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const int r = uf.find(static_cast<int>(k));
      if (copy_of_root.empty()) copy_of_root[r] = static_cast<int>(v);
      auto it = copy_of_root.find(r);
      if (it == copy_of_root.end()) {
        const int c = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back(mesh.nodes[v]);
        mesh.seam_pairs.emplace_back(static_cast<int>(v), c);
        it = copy_of_root.emplace(r, c).first;
      }
      for (int& x : mesh.triangles[f[k]])
        if (x == static_cast<int>(v)) x = it->second;
    }
  }
}

std::map<std::pair<int, int>, std::vector<int>> edge_map(const TriMesh& mesh) {
  std::map<std::pair<int, int>, std::vector<int>> edges;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) edges[detail::edge_key(tri[k], tri[(k + 1) % 3])].push_back(static_cast<int>(t));
  }
  return edges;
}

void tag_boundary(TriMesh& mesh, std::size_t tri_begin, const std::vector<Segment>& cracks, double tol) {
  std::map<std::pair<int, int>, int> count;
  for (std::size_t t = tri_begin; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) ++count[detail::edge_key(tri[k], tri[(k + 1) % 3])];
  }
  for (std::size_t t = tri_begin; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      if (count[detail::edge_key(a, b)] != 1) continue;
      BoundaryEdge e;
      e.nodes = {a, b};
      e.tag = on_any(0.5 * (mesh.nodes[a] + mesh.nodes[b]), cracks, tol) ? BoundaryEdge::Tag::CrackSide
                                                                         : BoundaryEdge::Tag::OneSided;
      mesh.boundary_edges.push_back(e);
    }
  }
}

}  // namespace

TriMesh triangulate(const GeneralizedPolygon& P, double h_target, const MeshOptions& options) {
  if (!(h_target > 0.0) || !std::isfinite(h_target)) throw Error(ErrorKind::InvalidParameter, "mesh size must be positive");
  if (P.components().empty()) throw Error(ErrorKind::MeshingFailure, "polygon has no components");
  // Equilateral triangles of side h hold about 1.15 A / h^2 nodes.
  const double expected = 1.15 * area(P) / (h_target * h_target) + generalized_perimeter(P) / h_target;
  if (expected > static_cast<double>(options.max_nodes))
    throw Error(ErrorKind::MeshingFailure, "mesh size " + std::to_string(h_target) + " needs about " +
                                               std::to_string(static_cast<long long>(expected)) + " nodes, above the limit of " +
                                               std::to_string(options.max_nodes));
  const double tol = std::max(1e-10 * P.diameter(), 1e3 * P.tolerance());
  const auto all_cracks = P.interior_crack_segments();
  TriMesh mesh;
  mesh.h_target = h_target;
  for (const auto& comp : P.components()) {
    std::vector<Segment> cracks;
    for (const auto& s : all_cracks) {
      const Point2 m = 0.5 * (s.a + s.b);
      if (comp.walk.contains(m)) cracks.push_back(s);
    }
    const auto cm = mesh_component(comp, cracks, singular_points(comp, cracks), h_target, options, tol);
    const std::size_t node_begin = mesh.nodes.size(), tri_begin = mesh.triangles.size();
    const int off = static_cast<int>(node_begin);
    mesh.nodes.insert(mesh.nodes.end(), cm.nodes.begin(), cm.nodes.end());
    for (auto t : cm.triangles) mesh.triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
    duplicate_seams(mesh, node_begin, tri_begin, cracks, tol);
    tag_boundary(mesh, tri_begin, cracks, tol);
  }
  if (auto v = mesh_violation(mesh)) throw Error(ErrorKind::MeshingFailure, *v);
  return mesh;
}

TriMesh scale_mesh(const TriMesh& mesh, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidParameter, "scale factor must be positive");
  TriMesh out = mesh;
  for (auto& p : out.nodes) p = t * p;
  out.h_target *= t;
  return out;
}

MeshStats mesh_stats(const TriMesh& mesh) {
  MeshStats s;
  s.min_angle_deg = 180.0;
  for (const auto& t : mesh.triangles) {
    const Point2 a = mesh.nodes[t[0]], b = mesh.nodes[t[1]], c = mesh.nodes[t[2]];
    s.total_area += 0.5 * orient(a, b, c);
    const std::array<Point2, 3> p{a, b, c};
    for (int k = 0; k < 3; ++k) {
      const Point2 u = p[(k + 1) % 3] - p[k], v = p[(k + 2) % 3] - p[k];
      const double ang = std::atan2(std::abs(cross(u, v)), dot(u, v)) * 180.0 / std::numbers::pi;
      s.min_angle_deg = std::min(s.min_angle_deg, ang);
      s.max_edge = std::max(s.max_edge, norm(u));
    }
  }
  for (const auto& e : mesh.boundary_edges) {
    s.boundary_length += distance(mesh.nodes[e.nodes[0]], mesh.nodes[e.nodes[1]]);
    if (e.tag == BoundaryEdge::Tag::CrackSide) ++s.crack_side_edges;
  }
  return s;
}

std::optional<std::string> mesh_violation(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.nodes.size());
  double scale = 0.0;
  for (const auto& p : mesh.nodes) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int v : tri)
      if (v < 0 || v >= n) return "triangle " + std::to_string(t) + " references a missing node";
    if (!(orient(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]) > 0.0))
      return "triangle " + std::to_string(t) + " is not counter-clockwise";
  }
  const auto edges = edge_map(mesh);
  std::size_t one_sided = 0;
  for (const auto& [e, ts] : edges) {
    if (ts.size() > 2) return "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ") has more than two triangles";
    if (ts.size() == 1) ++one_sided;
  }
  if (one_sided != mesh.boundary_edges.size()) return "boundary edge list does not match the triangle incidence";
  for (const auto& b : mesh.boundary_edges) {
    auto it = edges.find(detail::edge_key(b.nodes[0], b.nodes[1]));
    if (it == edges.end() || it->second.size() != 1) return "boundary edge is not incident to exactly one triangle";
  }
  for (const auto& [a, b] : mesh.seam_pairs) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) return "seam pair references invalid nodes";
    if (distance(mesh.nodes[a], mesh.nodes[b]) > 1e-12 * std::max(scale, 1.0)) return "seam pair nodes do not coincide";
  }
  // Seam copies never share a triangle; a crack tip is a single node.
  std::set<std::pair<int, int>> seam(mesh.seam_pairs.begin(), mesh.seam_pairs.end());
  for (const auto& [e, ts] : edges) {
    if (seam.count(e)) return "seam copies share an edge";
  }
  return std::nullopt;
}

void write_mesh_text(std::ostream& os, const TriMesh& mesh) {
  os.precision(17);
  os << "nodes " << mesh.nodes.size() << '\n';
  for (const auto& p : mesh.nodes) os << p.x << ' ' << p.y << '\n';
  os << "triangles " << mesh.triangles.size() << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "boundary_edges " << mesh.boundary_edges.size() << '\n';
  for (const auto& e : mesh.boundary_edges)
    os << e.nodes[0] << ' ' << e.nodes[1] << ' ' << (e.tag == BoundaryEdge::Tag::CrackSide ? "crack" : "wall") << '\n';
  os << "seam_pairs " << mesh.seam_pairs.size() << '\n';
  for (const auto& [a, b] : mesh.seam_pairs) os << a << ' ' << b << '\n';
}

}  // namespace robin
