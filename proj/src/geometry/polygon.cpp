#include <algorithm>
#include <numeric>
#include <sstream>

#include "robin/error.hpp"
#include "robin/geometry.hpp"
#include "predicates.hpp"

namespace robin {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

namespace detail {

bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  const double lab = distance(a, b), lcd = distance(c, d);
  const auto sgn = [](double v, double scale) { return std::abs(v) <= scale ? 0 : (v > 0 ? 1 : -1); };
  const int s1 = sgn(d1, tol * lcd), s2 = sgn(d2, tol * lcd);
  const int s3 = sgn(d3, tol * lab), s4 = sgn(d4, tol * lab);
  if (s1 * s2 < 0 && s3 * s4 < 0) return true;
  if (point_segment_distance(a, c, d) <= tol) return true;
  if (point_segment_distance(b, c, d) <= tol) return true;
  if (point_segment_distance(c, a, b) <= tol) return true;
  if (point_segment_distance(d, a, b) <= tol) return true;
  return false;
}

bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
  const double lab = distance(a, b), lcd = distance(c, d);
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  return ((d1 > tol * lcd && d2 < -tol * lcd) || (d1 < -tol * lcd && d2 > tol * lcd)) &&
         ((d3 > tol * lab && d4 < -tol * lab) || (d3 < -tol * lab && d4 > tol * lab));
}

std::vector<std::pair<double, double>> collinear_overlap(Point2 a, Point2 b, Point2 c, Point2 d,
                                                         double tol) {
  const double len = distance(a, b);
  if (len == 0.0) return {};
  if (std::abs(orient(a, b, c)) > tol * len || std::abs(orient(a, b, d)) > tol * len) return {};
  const Point2 u = (1.0 / len) * (b - a);
  double t0 = dot(c - a, u) / len, t1 = dot(d - a, u) / len;
  if (t0 > t1) std::swap(t0, t1);
  t0 = std::max(t0, 0.0);
  t1 = std::min(t1, 1.0);
  if (t1 - t0 <= tol / len) return {};
  return {{t0, t1}};
}

double polygon_tolerance(std::span<const Point2> v) {
  double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
  for (const auto& p : v) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  return 1e-12 * std::max(std::hypot(xmax - xmin, ymax - ymin), 1e-300);
}

}  // namespace detail

std::optional<std::string> simple_polygon_violation(std::span<const Point2> v) {
  const std::size_t n = v.size();
  if (n < 3) return "fewer than 3 vertices";
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(v[i].x) || !std::isfinite(v[i].y)) return "non-finite vertex " + std::to_string(i);
  }
  const double tol = detail::polygon_tolerance(v);
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(v[i], v[(i + 1) % n]) <= tol) return "zero-length edge at vertex " + std::to_string(i);
  }
  double a2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) a2 += cross(v[i], v[(i + 1) % n]);
  if (!(a2 > 0.0)) return "signed area not positive (walk must be counter-clockwise)";
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = v[i], b = v[(i + 1) % n];
    // Consecutive edges must not fold back onto each other.
    const Point2 c = v[(i + 2) % n];
    if (std::abs(orient(a, b, c)) <= tol * distance(a, c) && dot(b - a, c - b) < 0.0) {
      return "edges fold back at vertex " + std::to_string((i + 1) % n);
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (detail::segments_touch(a, b, v[j], v[(j + 1) % n], tol)) {
        return "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect";
      }
    }
  }
  return std::nullopt;
}

SimplePolygon::SimplePolygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (auto why = simple_polygon_violation(vertices_)) {
    throw Error(ErrorKind::InvalidPolygon, "walk is not a simple polygon: " + *why);
  }
}

const Point2& SimplePolygon::vertex(std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(vertices_.size());
  return vertices_[static_cast<std::size_t>(((i % n) + n) % n)];
}

double SimplePolygon::signed_area() const {
  double a2 = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) a2 += cross(vertices_[i], vertices_[(i + 1) % n]);
  return 0.5 * a2;
}

double SimplePolygon::perimeter() const {
  double p = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) p += distance(vertices_[i], vertices_[(i + 1) % n]);
  return p;
}

BoundingBox SimplePolygon::bbox() const {
  BoundingBox b{vertices_.front(), vertices_.front()};
  for (const auto& p : vertices_) {
    b.lo.x = std::min(b.lo.x, p.x);
    b.lo.y = std::min(b.lo.y, p.y);
    b.hi.x = std::max(b.hi.x, p.x);
    b.hi.y = std::max(b.hi.y, p.y);
  }
  return b;
}

bool SimplePolygon::is_convex() const {
  const std::size_t n = vertices_.size();
  const double tol = detail::polygon_tolerance(vertices_);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i], b = vertices_[(i + 1) % n], c = vertices_[(i + 2) % n];
    if (orient(a, b, c) < -tol * distance(a, c)) return false;
  }
  return true;
}

bool SimplePolygon::on_boundary(Point2 p, double tol) const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, vertices_[i], vertices_[(i + 1) % n]) <= tol) return true;
  }
  return false;
}

bool SimplePolygon::contains(Point2 p) const {
  if (on_boundary(p, detail::polygon_tolerance(vertices_))) return false;
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = vertices_[i], b = vertices_[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

Point2 SimplePolygon::interior_point() const {
  // Centroid of an ear: a convex vertex whose triangle holds no other vertex.
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertex(static_cast<std::ptrdiff_t>(i) - 1), b = vertices_[i],
                 c = vertex(static_cast<std::ptrdiff_t>(i) + 1);
    if (orient(a, b, c) <= 0.0) continue;
    bool empty = true;
    for (std::size_t j = 0; j < n && empty; ++j) {
      const Point2 q = vertices_[j];
      if (q == a || q == b || q == c) continue;
      if (orient(a, b, q) >= 0 && orient(b, c, q) >= 0 && orient(c, a, q) >= 0) empty = false;
    }
    if (empty) {
      const Point2 g = (1.0 / 3.0) * (a + b + c);
      if (contains(g)) return g;
    }
  }
  throw Error(ErrorKind::InvalidPolygon, "no interior point found");
}

double Crack::length() const {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) len += distance(polyline[i], polyline[i + 1]);
  return len;
}

namespace {

std::string where(std::size_t comp, std::size_t crack, std::size_t vertex) {
  std::ostringstream os;
  os << "component " << comp << ", crack " << crack << ", vertex " << vertex;
  return os.str();
}

bool on_crack(Point2 p, const Crack& c, double tol) {
  for (std::size_t i = 0; i + 1 < c.polyline.size(); ++i) {
    if (point_segment_distance(p, c.polyline[i], c.polyline[i + 1]) <= tol) return true;
  }
  return false;
}

// Pieces of segment [a,b] not covered by any edge of any walk.
void add_uncovered(Point2 a, Point2 b, const std::vector<Component>& comps, double tol,
                   std::vector<Segment>& out) {
  std::vector<std::pair<double, double>> covered;
  for (const auto& c : comps) {
    const auto& w = c.walk.vertices();
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (auto iv : detail::collinear_overlap(a, b, w[i], w[(i + 1) % w.size()], tol)) covered.push_back(iv);
    }
  }
  std::sort(covered.begin(), covered.end());
  double t = 0.0;
  const double len = distance(a, b);
  for (auto [t0, t1] : covered) {
    if (t0 > t + tol / len) out.push_back({a + t * (b - a), a + t0 * (b - a)});
    t = std::max(t, t1);
  }
  if (1.0 > t + tol / len) out.push_back({a + t * (b - a), b});
}

}  // namespace

GeneralizedPolygon::GeneralizedPolygon(std::vector<Component> components, int side_budget, std::string name)
    : components_(std::move(components)), side_budget_(side_budget), name_(std::move(name)) {
  if (components_.empty()) throw Error(ErrorKind::InvalidPolygon, "no components");
  const double tol = tolerance();

  for (std::size_t ci = 0; ci < components_.size(); ++ci) {
    const auto& comp = components_[ci];
    if (comp.walk.size() < 3) throw Error(ErrorKind::InvalidPolygon, "component " + std::to_string(ci) + ": empty walk");
    const auto& w = comp.walk.vertices();
    // Union-find over crack vertices; node 0 stands for the walk.
    std::vector<Point2> nodes;
    std::vector<std::size_t> parent{0};
    const auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    const auto node_of = [&](Point2 p) -> std::size_t {
      if (comp.walk.on_boundary(p, tol)) return 0;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (distance(nodes[k], p) <= tol) return k + 1;
      }
      nodes.push_back(p);
      parent.push_back(parent.size());
      return nodes.size();
    };

    for (std::size_t k = 0; k < comp.cracks.size(); ++k) {
      const auto& pl = comp.cracks[k].polyline;
      if (pl.size() < 2) throw Error(ErrorKind::InvalidPolygon, where(ci, k, 0) + ": crack needs two vertices");
      for (std::size_t v = 0; v < pl.size(); ++v) {
        if (!std::isfinite(pl[v].x) || !std::isfinite(pl[v].y))
          throw Error(ErrorKind::InvalidPolygon, where(ci, k, v) + ": non-finite coordinate");
        if (!comp.walk.contains(pl[v]) && !comp.walk.on_boundary(pl[v], tol))
          throw Error(ErrorKind::InvalidPolygon, where(ci, k, v) + ": crack vertex outside host component");
        if (v + 1 < pl.size()) {
          if (distance(pl[v], pl[v + 1]) <= tol)
            throw Error(ErrorKind::InvalidPolygon, where(ci, k, v) + ": zero-length crack segment");
          const Point2 mid = 0.5 * (pl[v] + pl[v + 1]);
          if (!comp.walk.contains(mid) && !comp.walk.on_boundary(mid, tol))
            throw Error(ErrorKind::InvalidPolygon, where(ci, k, v) + ": crack segment leaves host component");
          for (std::size_t e = 0; e < w.size(); ++e) {
            if (detail::segments_cross_properly(pl[v], pl[v + 1], w[e], w[(e + 1) % w.size()], tol))
              throw Error(ErrorKind::InvalidPolygon, where(ci, k, v) + ": crack crosses the walk");
          }
        }
      }
      // Self-intersection of the polyline.
      for (std::size_t i = 0; i + 1 < pl.size(); ++i) {
        if (i + 2 < pl.size()) {
          const Point2 a = pl[i], b = pl[i + 1], c = pl[i + 2];
          if (std::abs(orient(a, b, c)) <= tol * distance(a, c) && dot(b - a, c - b) < 0.0)
            throw Error(ErrorKind::InvalidPolygon, where(ci, k, i + 1) + ": crack folds back");
        }
        for (std::size_t j = i + 2; j + 1 < pl.size(); ++j) {
          if (detail::segments_touch(pl[i], pl[i + 1], pl[j], pl[j + 1], tol))
            throw Error(ErrorKind::InvalidPolygon, where(ci, k, i) + ": crack self-intersects");
        }
      }
      bool anchored = comp.walk.on_boundary(pl.front(), tol);
      for (std::size_t prev = 0; prev < k && !anchored; ++prev) anchored = on_crack(pl.front(), comp.cracks[prev], tol);
      if (!anchored)
        throw Error(ErrorKind::InvalidPolygon,
                    where(ci, k, 0) + ": first crack vertex is neither on the walk nor on an earlier crack");
      for (std::size_t v = 0; v + 1 < pl.size(); ++v) {
        std::vector<Segment> pieces;
        add_uncovered(pl[v], pl[v + 1], components_, tol, pieces);
        for (const auto& s : pieces) {
          // Split the crack graph at points where this segment meets earlier cracks.
          const std::size_t a = find(node_of(s.a)), b = find(node_of(s.b));
          if (a == b)
            throw Error(ErrorKind::InvalidPolygon,
                        where(ci, k, v) + ": cracks disconnect the component or close a loop");
          parent[a] = b;
        }
      }
    }
  }

  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (std::size_t j = i + 1; j < components_.size(); ++j) {
      const auto& A = components_[i].walk;
      const auto& B = components_[j].walk;
      for (std::size_t a = 0; a < A.size(); ++a) {
        if (B.contains(A[a]))
          throw Error(ErrorKind::InvalidPolygon, "component " + std::to_string(i) + ", vertex " + std::to_string(a) +
                                                     " lies inside component " + std::to_string(j));
        for (std::size_t b = 0; b < B.size(); ++b) {
          if (detail::segments_cross_properly(A[a], A.vertex(static_cast<std::ptrdiff_t>(a) + 1), B[b],
                                              B.vertex(static_cast<std::ptrdiff_t>(b) + 1), tol))
            throw Error(ErrorKind::InvalidPolygon, "components " + std::to_string(i) + " and " + std::to_string(j) +
                                                       " overlap (edges " + std::to_string(a) + ", " +
                                                       std::to_string(b) + ")");
        }
      }
      for (std::size_t b = 0; b < B.size(); ++b) {
        if (A.contains(B[b]))
          throw Error(ErrorKind::InvalidPolygon, "component " + std::to_string(j) + ", vertex " + std::to_string(b) +
                                                     " lies inside component " + std::to_string(i));
      }
      if (A.contains(B.interior_point()) || B.contains(A.interior_point()))
        throw Error(ErrorKind::InvalidPolygon,
                    "components " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }

  const int sides = side_count(*this);
  if (side_budget_ <= 0) side_budget_ = sides;
  if (sides > side_budget_)
    throw Error(ErrorKind::InvalidPolygon, "side count " + std::to_string(sides) + " exceeds side budget " +
                                               std::to_string(side_budget_));
  if (static_cast<int>(components_.size()) > max_components(side_budget_))
    throw Error(ErrorKind::InvalidPolygon, std::to_string(components_.size()) + " components exceed floor((N-1)/2) = " +
                                               std::to_string(max_components(side_budget_)));
}

GeneralizedPolygon GeneralizedPolygon::from_simple(SimplePolygon walk, int side_budget, std::string name) {
  return GeneralizedPolygon({Component{std::move(walk), {}}}, side_budget, std::move(name));
}

bool GeneralizedPolygon::has_cracks() const {
  return std::any_of(components_.begin(), components_.end(), [](const Component& c) { return !c.cracks.empty(); });
}

BoundingBox GeneralizedPolygon::bbox() const {
  BoundingBox b = components_.front().walk.bbox();
  for (const auto& c : components_) {
    const auto cb = c.walk.bbox();
    b.lo.x = std::min(b.lo.x, cb.lo.x);
    b.lo.y = std::min(b.lo.y, cb.lo.y);
    b.hi.x = std::max(b.hi.x, cb.hi.x);
    b.hi.y = std::max(b.hi.y, cb.hi.y);
  }
  return b;
}

double GeneralizedPolygon::tolerance() const { return 1e-12 * std::max(diameter(), 1e-300); }

std::vector<Segment> GeneralizedPolygon::interior_crack_segments() const {
  std::vector<Segment> out;
  const double tol = tolerance();
  for (const auto& c : components_) {
    for (const auto& k : c.cracks) {
      for (std::size_t v = 0; v + 1 < k.polyline.size(); ++v) add_uncovered(k.polyline[v], k.polyline[v + 1], components_, tol, out);
    }
  }
  return out;
}

int max_components(int side_budget) { return (side_budget - 1) / 2; }

GeneralizedPolygon unit_square(int side_budget) { return rectangle(1.0, 1.0, side_budget); }

GeneralizedPolygon rectangle(double width, double height, int side_budget) {
  return GeneralizedPolygon::from_simple(SimplePolygon({{0, 0}, {width, 0}, {width, height}, {0, height}}), side_budget,
                                         "rectangle");
}

}  // namespace robin
