#include <algorithm>

#include "robin/geometry.hpp"

namespace robin {

namespace {

struct OrientedPiece {
  Point2 u;       // unit direction, region on the left
  double offset;  // signed distance of the supporting line from the origin
  double t0, t1;  // extent along u
};

OrientedPiece make_piece(Point2 a, Point2 b) {
  const Point2 u = (1.0 / distance(a, b)) * (b - a);
  return {u, cross(u, a), dot(u, a), dot(u, b)};
}

}  // namespace

int side_count(const GeneralizedPolygon& P) {
  const double tol = 1e-9 * std::max(P.diameter(), 1e-300);
  std::vector<OrientedPiece> pieces;
  for (const auto& c : P.components()) {
    const auto& w = c.walk.vertices();
    for (std::size_t i = 0; i < w.size(); ++i) pieces.push_back(make_piece(w[i], w[(i + 1) % w.size()]));
  }
  for (const auto& s : P.interior_crack_segments()) {
    pieces.push_back(make_piece(s.a, s.b));
    pieces.push_back(make_piece(s.b, s.a));
  }

  std::vector<bool> used(pieces.size(), false);
  int sides = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::pair<double, double>> extent;
    for (std::size_t j = i; j < pieces.size(); ++j) {
      if (used[j]) continue;
      const double angle_gap = norm(pieces[j].u - pieces[i].u);
      if (angle_gap <= 1e-9 && std::abs(pieces[j].offset - pieces[i].offset) <= tol) {
        used[j] = true;
        extent.emplace_back(pieces[j].t0, pieces[j].t1);
      }
    }
    std::sort(extent.begin(), extent.end());
    double end = extent.front().second;
    ++sides;
    for (std::size_t k = 1; k < extent.size(); ++k) {
      if (extent[k].first > end + tol) ++sides;
      end = std::max(end, extent[k].second);
    }
  }
  return sides;
}

}  // namespace robin
