#include "delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "robin/error.hpp"

namespace robin::detail {

namespace {

Point2 circumcenter(Point2 a, Point2 b, Point2 c) {
  const Point2 ba = b - a, ca = c - a;
  const double d = 2.0 * cross(ba, ca);
  const double b2 = dot(ba, ba), c2 = dot(ca, ca);
  return a + Point2{(ca.y * b2 - ba.y * c2) / d, (ba.x * c2 - ca.x * b2) / d};
}

double angle_at(Point2 apex, Point2 p, Point2 q) {
  const Point2 u = p - apex, v = q - apex;
  return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

}  // namespace

ConformingDelaunay::ConformingDelaunay(BoundingBox box) {
  const Point2 c = 0.5 * (box.lo + box.hi);
  scale_ = std::max(box.diameter(), 1e-300);
  const double r = 50.0 * scale_;
  pts_ = {c + Point2{-r, -r}, c + Point2{r, -r}, c + Point2{0.0, r}};
  vert_tri_ = {0, 0, 0};
  vert_input_seg_ = {-1, -1, -1};
  is_input_ = {false, false, false};
  Tri t;
  t.v = {0, 1, 2};
  t.n = {-1, -1, -1};
  t.alive = true;
  tris_.push_back(t);
}

int ConformingDelaunay::new_tri(int a, int b, int c) {
  Tri t;
  t.v = {a, b, c};
  t.n = {-1, -1, -1};
  t.alive = true;
  if (!free_.empty()) {
    const int id = free_.back();
    free_.pop_back();
    tris_[static_cast<std::size_t>(id)] = t;
    return id;
  }
  tris_.push_back(t);
  return static_cast<int>(tris_.size()) - 1;
}

bool ConformingDelaunay::in_circle(const Tri& t, Point2 p) const {
  const Point2 a = pts_[t.v[0]] - p, b = pts_[t.v[1]] - p, c = pts_[t.v[2]] - p;
  const double det = dot(a, a) * cross(b, c) - dot(b, b) * cross(a, c) + dot(c, c) * cross(a, b);
  return det > 0.0;
}

int ConformingDelaunay::locate(Point2 p) const {
  int t = hint_;
  if (t < 0 || t >= static_cast<int>(tris_.size()) || !tris_[t].alive) {
    t = -1;
    for (std::size_t i = 0; i < tris_.size() && t < 0; ++i)
      if (tris_[i].alive) t = static_cast<int>(i);
  }
  for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
    const Tri& tri = tris_[static_cast<std::size_t>(t)];
    int next = -1;
    for (int i = 0; i < 3; ++i) {
      const Point2 a = pts_[tri.v[(i + 1) % 3]], b = pts_[tri.v[(i + 2) % 3]];
      if (orient(a, b, p) < 0.0 && tri.n[i] >= 0) {
        next = tri.n[i];
        break;
      }
    }
    if (next < 0) return t;
    t = next;
  }
  // Walk cycled on a degenerate configuration; fall back to a scan.
  const double tiny = 1e-14 * scale_ * scale_;
  for (std::size_t i = 0; i < tris_.size(); ++i) {
    const Tri& tri = tris_[i];
    if (!tri.alive) continue;
    bool in = true;
    for (int k = 0; k < 3 && in; ++k) in = orient(pts_[tri.v[(k + 1) % 3]], pts_[tri.v[(k + 2) % 3]], p) >= -tiny;
    if (in) return static_cast<int>(i);
  }
  throw Error(ErrorKind::MeshingFailure, "point location failed");
}

int ConformingDelaunay::insert(Point2 p, int on_input_segment, std::vector<int>* created) {
  const int t0 = locate(p);
  for (int k = 0; k < 3; ++k) {
    const int v = tris_[t0].v[k];
    if (distance(pts_[v], p) <= 1e-13 * scale_) return v;
  }
  std::vector<int> cavity{t0};
  std::vector<char> mark(tris_.size(), 0);
  mark[t0] = 1;
  for (std::size_t i = 0; i < cavity.size(); ++i) {
    for (int nb : tris_[cavity[i]].n) {
      if (nb >= 0 && !mark[nb] && in_circle(tris_[nb], p)) {
        mark[nb] = 1;
        cavity.push_back(nb);
      }
    }
  }
  struct Rim {
    int a, b, outer;
  };
  std::vector<Rim> rim;
  // Grow the cavity until p sees every rim edge strictly from the inside.
  for (bool grown = true; grown;) {
    grown = false;
    rim.clear();
    for (int t : cavity) {
      const Tri& tri = tris_[t];
      for (int i = 0; i < 3; ++i) {
        const int nb = tri.n[i];
        if (nb >= 0 && mark[nb]) continue;
        const int a = tri.v[(i + 1) % 3], b = tri.v[(i + 2) % 3];
        if (nb >= 0 && orient(pts_[a], pts_[b], p) <= 1e-15 * distance(pts_[a], pts_[b]) * scale_) {
          mark[nb] = 1;
          cavity.push_back(nb);
          grown = true;
          break;
        }
        rim.push_back({a, b, nb});
      }
      if (grown) break;
    }
  }

  const int pid = static_cast<int>(pts_.size());
  pts_.push_back(p);
  vert_tri_.push_back(-1);
  vert_input_seg_.push_back(on_input_segment);
  is_input_.push_back(false);

  for (int t : cavity) {
    tris_[t].alive = false;
    free_.push_back(t);
  }
  std::unordered_map<int, int> starts, ends;
  std::vector<int> fresh;
  for (const auto& r : rim) {
    const int id = new_tri(r.a, r.b, pid);
    Tri& tri = tris_[id];
    tri.n[2] = r.outer;
    if (r.outer >= 0) {
      Tri& o = tris_[r.outer];
      for (int k = 0; k < 3; ++k) {
        const int oa = o.v[(k + 1) % 3], ob = o.v[(k + 2) % 3];
        if (oa == r.b && ob == r.a) o.n[k] = id;
      }
    }
    starts[r.a] = id;
    ends[r.b] = id;
    fresh.push_back(id);
  }
  for (int id : fresh) {
    Tri& tri = tris_[id];
    tri.n[0] = starts.at(tri.v[1]);  // edge (b, p)
    tri.n[1] = ends.at(tri.v[0]);    // edge (p, a)
    for (int k = 0; k < 3; ++k) vert_tri_[tri.v[k]] = id;
  }
  hint_ = fresh.front();
  if (created) created->insert(created->end(), fresh.begin(), fresh.end());
  return pid;
}

int ConformingDelaunay::add_input_vertex(Point2 p) {
  const std::size_t before = pts_.size();
  const int id = insert(p, -2, nullptr);
  if (static_cast<std::size_t>(id) >= before) {
    is_input_[id] = true;
  }
  return id;
}

void ConformingDelaunay::add_segment(int a, int b) {
  if (a == b) return;
  const int input = static_cast<int>(input_segs_.size());
  input_segs_.push_back({a, b});
  segs_.push_back({a, b, input, true});
  seg_queue_.push_back(static_cast<int>(segs_.size()) - 1);
}

bool ConformingDelaunay::edge_exists(int a, int b, int* apex1, int* apex2) const {
  const int start = vert_tri_[a];
  if (start < 0) return false;
  int t = start;
  bool found = false;
  for (std::size_t guard = 0; guard < tris_.size() + 1; ++guard) {
    const Tri& tri = tris_[t];
    int i = 0;
    while (tri.v[i] != a) ++i;
    const int b1 = tri.v[(i + 1) % 3], b2 = tri.v[(i + 2) % 3];
    if (b1 == b) {
      *apex1 = b2;
      *apex2 = tri.n[(i + 2) % 3] >= 0 ? -2 : -1;
      if (*apex2 == -2) {
        const Tri& o = tris_[tri.n[(i + 2) % 3]];
        for (int k = 0; k < 3; ++k)
          if (o.v[k] != a && o.v[k] != b) *apex2 = o.v[k];
      }
      found = true;
      break;
    }
    const int nx = tri.n[(i + 2) % 3];  // across edge (a, b1)
    if (nx < 0 || nx == start) break;
    t = nx;
  }
  if (found) return true;
  // Rotate the other way in case the fan is open (super-triangle corners).
  t = start;
  for (std::size_t guard = 0; guard < tris_.size() + 1; ++guard) {
    const Tri& tri = tris_[t];
    int i = 0;
    while (tri.v[i] != a) ++i;
    const int b2 = tri.v[(i + 2) % 3];
    if (b2 == b) {
      *apex1 = tri.v[(i + 1) % 3];
      *apex2 = -1;
      const int o_id = tri.n[(i + 1) % 3];
      if (o_id >= 0) {
        const Tri& o = tris_[o_id];
        for (int k = 0; k < 3; ++k)
          if (o.v[k] != a && o.v[k] != b) *apex2 = o.v[k];
      }
      return true;
    }
    const int nx = tri.n[(i + 1) % 3];  // across edge (b2, a)
    if (nx < 0 || nx == start) break;
    t = nx;
  }
  return false;
}

bool ConformingDelaunay::encroached(const Subseg& s) const {
  int c1 = -1, c2 = -1;
  if (!edge_exists(s.a, s.b, &c1, &c2)) return true;
  const Point2 a = pts_[s.a], b = pts_[s.b];
  const double slack = 1e-10 * dot(b - a, b - a);
  for (int c : {c1, c2}) {
    if (c < 0) continue;
    const Point2 p = pts_[c];
    if (dot(a - p, b - p) <= slack) return true;
  }
  return false;
}

void ConformingDelaunay::split(int seg) {
  const Subseg s = segs_[seg];
  const Point2 a = pts_[s.a], b = pts_[s.b];
  const double len = distance(a, b);
  Point2 m = 0.5 * (a + b);
  // Concentric shells around input vertices keep splits near small input
  // angles at matching radii.
  const bool ia = is_input_[s.a], ib = is_input_[s.b];
  if (ia != ib) {
    const Point2 from = ia ? a : b, to = ia ? b : a;
    const double shell = std::exp2(std::round(std::log2(0.5 * len)));
    m = from + (shell / len) * (to - from);
  }
  segs_[seg].alive = false;
  const int mid = insert(m, s.input, nullptr);
  segs_.push_back({s.a, mid, s.input, true});
  seg_queue_.push_back(static_cast<int>(segs_.size()) - 1);
  segs_.push_back({mid, s.b, s.input, true});
  seg_queue_.push_back(static_cast<int>(segs_.size()) - 1);
  const Point2 p = pts_[mid];
  for (std::size_t k = 0; k < segs_.size(); ++k) {
    const Subseg& o = segs_[k];
    if (!o.alive || o.a == mid || o.b == mid) continue;
    const Point2 oa = pts_[o.a], ob = pts_[o.b];
    if (dot(oa - p, ob - p) <= 1e-10 * dot(ob - oa, ob - oa)) seg_queue_.push_back(static_cast<int>(k));
  }
}

void ConformingDelaunay::conform() {
  std::size_t guard = 0;
  while (!seg_queue_.empty()) {
    const int s = seg_queue_.front();
    seg_queue_.pop_front();
    if (!segs_[s].alive) continue;
    if (encroached(segs_[s])) split(s);
    if (++guard > 50'000'000) throw Error(ErrorKind::MeshingFailure, "segment recovery did not terminate");
  }
}

bool ConformingDelaunay::exempt(const Tri& t) const {
  // Skinny triangles forced by small input angles: the shortest edge joins
  // two points on different input segments sharing a sharp input vertex.
  int shortest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const double l = distance(pts_[t.v[(i + 1) % 3]], pts_[t.v[(i + 2) % 3]]);
    if (l < best) {
      best = l;
      shortest = i;
    }
  }
  const int u = t.v[(shortest + 1) % 3], w = t.v[(shortest + 2) % 3];
  const auto corners_of = [&](int v) {
    std::vector<int> out;
    if (is_input_[v]) {
      out.push_back(v);
    } else if (vert_input_seg_[v] >= 0) {
      const auto& s = input_segs_[vert_input_seg_[v]];
      out = {s[0], s[1]};
    }
    return out;
  };
  for (int cu : corners_of(u)) {
    for (int cw : corners_of(w)) {
      if (cu == cw && input_angle_[cu] < std::numbers::pi / 3.0) return true;
    }
  }
  // Shortest edge touching a sharp input vertex directly.
  for (int v : {u, w}) {
    if (is_input_[v] && input_angle_[v] < std::numbers::pi / 3.0) {
      const int other = v == u ? w : u;
      if (vert_input_seg_[other] >= 0 || is_input_[other]) return true;
    }
  }
  return false;
}

void ConformingDelaunay::refine(const Quality& q) {
  // Smallest angle between input segments at every input vertex.
  input_angle_.assign(pts_.size(), 2.0 * std::numbers::pi);
  std::vector<std::vector<Point2>> dirs(pts_.size());
  for (const auto& s : input_segs_) {
    dirs[s[0]].push_back(pts_[s[1]] - pts_[s[0]]);
    dirs[s[1]].push_back(pts_[s[0]] - pts_[s[1]]);
  }
  for (std::size_t v = 0; v < dirs.size(); ++v) {
    for (std::size_t i = 0; i < dirs[v].size(); ++i)
      for (std::size_t j = i + 1; j < dirs[v].size(); ++j)
        input_angle_[v] = std::min(input_angle_[v], angle_at({0, 0}, dirs[v][i], dirs[v][j]));
  }

  conform();
  std::deque<int> queue;
  for (std::size_t i = 0; i < tris_.size(); ++i)
    if (tris_[i].alive) queue.push_back(static_cast<int>(i));

  std::vector<int> created;
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    const Tri t = tris_[id];
    if (!t.alive || t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;
    const Point2 a = pts_[t.v[0]], b = pts_[t.v[1]], c = pts_[t.v[2]];
    const Point2 g = (1.0 / 3.0) * (a + b + c);
    if (!q.inside(g)) continue;
    const double longest = std::max({distance(a, b), distance(b, c), distance(c, a)});
    const double min_angle = std::min({angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)});
    const bool too_big = longest > q.size(g);
    const bool skinny = min_angle < q.min_angle_rad && !exempt(t);
    if (!too_big && !skinny) continue;
    if (pts_.size() > q.max_vertices) throw Error(ErrorKind::MeshingFailure, "refinement exceeded the vertex limit");

    const Point2 cc = circumcenter(a, b, c);
    std::vector<int> hit;
    for (std::size_t k = 0; k < segs_.size(); ++k) {
      const Subseg& s = segs_[k];
      if (!s.alive) continue;
      const Point2 sa = pts_[s.a], sb = pts_[s.b];
      if (dot(sa - cc, sb - cc) < 0.0) hit.push_back(static_cast<int>(k));
    }
    if (!hit.empty()) {
      for (int k : hit)
        if (segs_[k].alive) split(k);
      created.clear();
      conform();
      // Splits replace triangles; rescan everything created since.
      for (std::size_t i = 0; i < tris_.size(); ++i)
        if (tris_[i].alive) queue.push_back(static_cast<int>(i));
      continue;
    }
    if (!q.inside(cc)) continue;
    created.clear();
    insert(cc, -1, &created);
    for (int n : created) queue.push_back(n);
  }
}

std::vector<std::array<int, 3>> ConformingDelaunay::triangles() const {
  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris_) {
    if (!t.alive || t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;
    out.push_back(t.v);
  }
  return out;
}

std::vector<std::array<int, 2>> ConformingDelaunay::subsegments() const {
  std::vector<std::array<int, 2>> out;
  for (const auto& s : segs_)
    if (s.alive) out.push_back({s.a, s.b});
  return out;
}

bool ConformingDelaunay::segments_present() const {
  for (const auto& s : segs_) {
    if (!s.alive) continue;
    int c1, c2;
    if (!edge_exists(s.a, s.b, &c1, &c2)) return false;
  }
  return true;
}

}  // namespace robin::detail
