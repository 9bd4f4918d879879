#pragma once

// Planar polygon kernel: simple polygons, generalized (cracked, possibly
// disconnected) polygons, their measures and the geometric constructions
// used by the shape-optimization experiments.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace robin {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Twice the signed area of (a, b, c); positive for a left turn.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

double point_segment_distance(Point2 p, Point2 a, Point2 b);

struct BoundingBox {
  Point2 lo;
  Point2 hi;
  double diameter() const { return distance(lo, hi); }
};

/// Counter-clockwise, non-self-intersecting boundary walk with no
/// zero-length edges. The constructor validates and throws
/// ErrorKind::InvalidPolygon on violation.
class SimplePolygon {
 public:
  SimplePolygon() = default;
  explicit SimplePolygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }
  const Point2& vertex(std::ptrdiff_t i) const;  // cyclic indexing

  double signed_area() const;
  double perimeter() const;
  BoundingBox bbox() const;
  bool is_convex() const;
  /// Strictly inside (points on the walk are not contained).
  bool contains(Point2 p) const;
  bool on_boundary(Point2 p, double tol) const;
  /// A point strictly inside the polygon.
  Point2 interior_point() const;

 private:
  std::vector<Point2> vertices_;
};

/// Reason a vertex list fails the simple-polygon test, or nullopt.
std::optional<std::string> simple_polygon_violation(std::span<const Point2> vertices);

struct Crack {
  std::vector<Point2> polyline;
  double length() const;
};

struct Component {
  SimplePolygon walk;
  std::vector<Crack> cracks;
};

struct Segment {
  Point2 a;
  Point2 b;
  double length() const { return distance(a, b); }
};

/// Union of simple polygons with pairwise disjoint interiors, each carrying
/// cracks (boundary segments touched by the region on both sides).
class GeneralizedPolygon {
 public:
  GeneralizedPolygon() = default;
  /// Validates every invariant; throws ErrorKind::InvalidPolygon naming the
  /// first offending component / vertex.
  GeneralizedPolygon(std::vector<Component> components, int side_budget, std::string name = {});

  static GeneralizedPolygon from_simple(SimplePolygon walk, int side_budget = 0, std::string name = {});

  const std::vector<Component>& components() const { return components_; }
  int side_budget() const { return side_budget_; }
  const std::string& name() const { return name_; }
  bool has_cracks() const;
  BoundingBox bbox() const;
  double diameter() const { return bbox().diameter(); }

  /// Crack pieces not lying on any walk, i.e. the part of the boundary
  /// interior to the closure that the region touches from both sides.
  std::vector<Segment> interior_crack_segments() const;
  /// Geometric tolerance: 1e-12 times the bounding-box diameter.
  double tolerance() const;

 private:
  std::vector<Component> components_;
  int side_budget_ = 0;
  std::string name_;
};

/// Constraint of the optimization problems.
struct ConstraintSpec {
  enum class Kind { Area, GeneralizedPerimeter };
  Kind kind = Kind::Area;
  double bound = 1.0;
  bool convex = false;

  static ConstraintSpec area(double m, bool convex = false);
  static ConstraintSpec perimeter(double p, bool convex = false);
  /// The constrained quantity evaluated on P.
  double measure(const GeneralizedPolygon& P) const;
};

double area(const GeneralizedPolygon& P);
double generalized_perimeter(const GeneralizedPolygon& P);
/// Sides counted with multiplicity: on each supporting line and for each side
/// of it the region lies on, every maximal connected boundary chain is one
/// side.
int side_count(const GeneralizedPolygon& P);
/// floor((N - 1) / 2), the maximal number of components with N sides.
int max_components(int side_budget);

/// Sampled Hausdorff-complementary distance inside the common inflated
/// bounding box. Error is O(resolution).
double hc_distance(const GeneralizedPolygon& E, const GeneralizedPolygon& F, double resolution);

SimplePolygon regular_ngon(int N, const ConstraintSpec& constraint);
GeneralizedPolygon scale(const GeneralizedPolygon& P, double t);

enum class CutSide { AlphaPlus, AlphaMinus };

struct CutResult {
  GeneralizedPolygon cut_polygon;
  double removed_triangle_area = 0.0;
  double sigma_length = 0.0;
  double s_length = 0.0;
  double geometric_ratio = 0.0;
  Point2 corner;
  /// Unit inward direction used as the cut depth axis.
  Point2 depth_axis;
};

/// Removes the triangle of depth `epsilon` at a convex corner of component
/// `component`, vertex `vertex`. Corners where a crack leaves the walk are
/// cut on one side of the crack only, selected by `side`.
CutResult cut_corner(const GeneralizedPolygon& P, std::size_t component, std::size_t vertex,
                     double epsilon, CutSide side = CutSide::AlphaPlus);

/// Convex corners usable by cut_corner, as (component, vertex) pairs.
std::vector<std::pair<std::size_t, std::size_t>> convex_corners(const GeneralizedPolygon& P);

/// Complement of the closure of the unbounded component of the complement of
/// the closure: holes and cracks are filled.
GeneralizedPolygon fill_holes(const GeneralizedPolygon& P);

/// Union of simple polygons approximating P: cracks are opened into thin
/// notches and edges shared between components are pulled apart by epsilon.
GeneralizedPolygon detach_cracks(const GeneralizedPolygon& P, double epsilon);

/// Regular polygon / symmetric helpers used by tests and families.
GeneralizedPolygon unit_square(int side_budget = 0);
GeneralizedPolygon rectangle(double width, double height, int side_budget = 0);

}  // namespace robin
