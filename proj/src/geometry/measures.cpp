#include <numbers>

#include "robin/error.hpp"
#include "robin/geometry.hpp"

namespace robin {

double area(const GeneralizedPolygon& P) {
  double a = 0.0;
  for (const auto& c : P.components()) a += c.walk.signed_area();
  return a;
}

// Walks contribute every edge once; an edge shared by two components is
// walked twice. Crack pieces off the walks are touched from both sides.
double generalized_perimeter(const GeneralizedPolygon& P) {
  double per = 0.0;
  for (const auto& c : P.components()) per += c.walk.perimeter();
  for (const auto& s : P.interior_crack_segments()) per += 2.0 * s.length();
  return per;
}

ConstraintSpec ConstraintSpec::area(double m, bool convex) {
  if (!(m > 0.0)) throw Error(ErrorKind::InvalidParameter, "area bound must be positive");
  return {Kind::Area, m, convex};
}

ConstraintSpec ConstraintSpec::perimeter(double p, bool convex) {
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidParameter, "perimeter bound must be positive");
  return {Kind::GeneralizedPerimeter, p, convex};
}

double ConstraintSpec::measure(const GeneralizedPolygon& P) const {
  return kind == Kind::Area ? robin::area(P) : generalized_perimeter(P);
}

SimplePolygon regular_ngon(int N, const ConstraintSpec& constraint) {
  if (N < 3) throw Error(ErrorKind::InvalidParameter, "regular polygon needs N >= 3");
  if (!(constraint.bound > 0.0)) throw Error(ErrorKind::InvalidParameter, "constraint bound must be positive");
  const double pi = std::numbers::pi;
  const double n = N;
  double R = 0.0;
  if (constraint.kind == ConstraintSpec::Kind::Area) {
    R = std::sqrt(2.0 * constraint.bound / (n * std::sin(2.0 * pi / n)));
  } else {
    R = constraint.bound / (2.0 * n * std::sin(pi / n));
  }
  // Bottom edge horizontal.
  const double start = -pi / 2.0 + pi / n;
  std::vector<Point2> v;
  v.reserve(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    const double th = start + 2.0 * pi * k / n;
    v.push_back({R * std::cos(th), R * std::sin(th)});
  }
  return SimplePolygon(std::move(v));
}

GeneralizedPolygon scale(const GeneralizedPolygon& P, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidParameter, "scale factor must be positive");
  if (t == 1.0) return P;
  std::vector<Component> comps;
  for (const auto& c : P.components()) {
    std::vector<Point2> w;
    for (const auto& p : c.walk.vertices()) w.push_back(t * p);
    Component out{SimplePolygon(std::move(w)), {}};
    for (const auto& k : c.cracks) {
      Crack ck;
      for (const auto& p : k.polyline) ck.polyline.push_back(t * p);
      out.cracks.push_back(std::move(ck));
    }
    comps.push_back(std::move(out));
  }
  return GeneralizedPolygon(std::move(comps), P.side_budget(), P.name());
}

}  // namespace robin
