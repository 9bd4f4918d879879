#pragma once

#include <span>
#include <utility>
#include <vector>

#include "robin/geometry.hpp"

namespace robin::detail {

/// Closed segments [a,b] and [c,d] share at least one point (within tol).
bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d, double tol);
/// Interiors cross at a single point, transversally.
bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d, double tol);
/// Parameter interval along [a,b] covered by the collinear segment [c,d].
std::vector<std::pair<double, double>> collinear_overlap(Point2 a, Point2 b, Point2 c, Point2 d, double tol);
double polygon_tolerance(std::span<const Point2> v);

}  // namespace robin::detail
