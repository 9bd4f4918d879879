#pragma once

#include <array>
#include <deque>
#include <functional>
#include <vector>

#include "robin/geometry.hpp"

namespace robin::detail {

/// Incremental Bowyer-Watson triangulation with Ruppert-style refinement of a
/// planar straight-line graph. Segments are recovered by conforming splits
/// (no edge flips), so every subsegment ends up as a Delaunay edge.
class ConformingDelaunay {
 public:
  explicit ConformingDelaunay(BoundingBox box);

  /// Inserts an input vertex; returns its index (existing index on duplicates).
  int add_input_vertex(Point2 p);
  void add_segment(int a, int b);

  /// Splits encroached subsegments until every subsegment is a Delaunay edge
  /// with an empty diametral circle.
  void conform();

  struct Quality {
    double min_angle_rad;
    std::function<double(Point2)> size;
    std::function<bool(Point2)> inside;
    std::size_t max_vertices;
  };
  void refine(const Quality& q);

  const std::vector<Point2>& points() const { return pts_; }
  /// Alive triangles not touching the bounding super triangle.
  std::vector<std::array<int, 3>> triangles() const;
  std::vector<std::array<int, 2>> subsegments() const;
  /// True when every subsegment is an edge of the triangulation.
  bool segments_present() const;

 private:
  struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> n{};  // n[i] is across the edge opposite v[i]
    bool alive = false;
  };
  struct Subseg {
    int a = -1, b = -1;
    int input = -1;  // index of the original input segment
    bool alive = false;
  };

  int insert(Point2 p, int on_input_segment, std::vector<int>* created);
  int locate(Point2 p) const;
  bool in_circle(const Tri& t, Point2 p) const;
  bool encroached(const Subseg& s) const;
  bool edge_exists(int a, int b, int* apex1, int* apex2) const;
  void split(int seg);
  int new_tri(int a, int b, int c);
  bool exempt(const Tri& t) const;

  std::vector<Point2> pts_;
  std::vector<int> vert_tri_;
  std::vector<int> vert_input_seg_;  // -1 interior, -2 input vertex, else input segment id
  std::vector<bool> is_input_;
  std::vector<double> input_angle_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<Subseg> segs_;
  std::vector<std::array<int, 2>> input_segs_;
  std::deque<int> seg_queue_;
  mutable int hint_ = 0;
  double scale_ = 1.0;
};

}  // namespace robin::detail
