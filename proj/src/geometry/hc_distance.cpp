#include <algorithm>
#include <cmath>
#include <limits>

#include "robin/error.hpp"
#include "robin/geometry.hpp"

namespace robin {

namespace {

struct SampledSet {
  const GeneralizedPolygon& poly;
  std::vector<Segment> boundary;

  explicit SampledSet(const GeneralizedPolygon& P) : poly(P) {
    for (const auto& c : P.components()) {
      const auto& w = c.walk.vertices();
      for (std::size_t i = 0; i < w.size(); ++i) boundary.push_back({w[i], w[(i + 1) % w.size()]});
    }
    for (const auto& s : P.interior_crack_segments()) boundary.push_back(s);
  }

  bool inside(Point2 p) const {
    for (const auto& c : poly.components()) {
      if (c.walk.contains(p)) return true;
    }
    return false;
  }

  // Distance from p to the closed set D \ P. Inside P the nearest
  // complement point lies on the boundary (walks and cracks).
  double distance_to_complement(Point2 p) const {
    if (!inside(p)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : boundary) d = std::min(d, point_segment_distance(p, s.a, s.b));
    return d;
  }
};

// sup over samples of D \ from of dist(x, D \ to).
double directed(const SampledSet& from, const SampledSet& to, BoundingBox D, double res) {
  double worst = 0.0;
  const auto nx = static_cast<std::size_t>(std::ceil((D.hi.x - D.lo.x) / res));
  const auto ny = static_cast<std::size_t>(std::ceil((D.hi.y - D.lo.y) / res));
  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t j = 0; j <= ny; ++j) {
      const Point2 p{D.lo.x + i * res, D.lo.y + j * res};
      if (from.inside(p)) continue;
      worst = std::max(worst, to.distance_to_complement(p));
    }
  }
  for (const auto& s : from.boundary) {
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(s.length() / res)));
    for (std::size_t k = 0; k <= steps; ++k) {
      const Point2 p = s.a + (static_cast<double>(k) / steps) * (s.b - s.a);
      worst = std::max(worst, to.distance_to_complement(p));
    }
  }
  return worst;
}

}  // namespace

double hc_distance(const GeneralizedPolygon& E, const GeneralizedPolygon& F, double resolution) {
  if (!(resolution > 0.0)) throw Error(ErrorKind::InvalidParameter, "resolution must be positive");
  BoundingBox D = E.bbox();
  const BoundingBox bf = F.bbox();
  D.lo.x = std::min(D.lo.x, bf.lo.x);
  D.lo.y = std::min(D.lo.y, bf.lo.y);
  D.hi.x = std::max(D.hi.x, bf.hi.x);
  D.hi.y = std::max(D.hi.y, bf.hi.y);
  const double margin = 0.1 * D.diameter() + resolution;
  D.lo = D.lo - Point2{margin, margin};
  D.hi = D.hi + Point2{margin, margin};
  const SampledSet se(E), sf(F);
  return std::max(directed(se, sf, D, resolution), directed(sf, se, D, resolution));
}

}  // namespace robin
