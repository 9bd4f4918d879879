#include <algorithm>
#include <cmath>
#include <numbers>

#include "robin/error.hpp"
#include "robin/optimizer.hpp"

namespace robin {

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 0.0;
  return f;
}

std::vector<double> converged(const GeneralizedPolygon& P, double beta, int k, const SweepOptions& o) {
  ConvergenceOptions co;
  co.h0 = o.h0;
  co.mesh = o.mesh;
  return converged_eigs(P, beta, k, o.levels, co).extrapolated;
}

}  // namespace

CutReport cut_improves(const GeneralizedPolygon& P, const ObjectiveSpec& objective, const std::vector<double>& epsilons,
                       const SweepOptions& options) {
  if (!(objective.beta > 0.0)) throw Error(ErrorKind::InvalidParameter, "corner cuts are studied for beta > 0");
  if (epsilons.size() < 2) throw Error(ErrorKind::InvalidParameter, "a sweep needs at least two epsilons");
  const auto corners = convex_corners(P);
  if (corners.empty()) throw Error(ErrorKind::NotApplicable, "polygon has no convex corner");
  const double beta = objective.beta;
  const int k = std::max(objective.arity(), 3);

  CutReport rep;
  rep.component = corners.front().first;
  rep.vertex = corners.front().second;
  rep.base_lambdas = converged(P, beta, k, options);
  rep.base_value = evaluate(objective, std::span<const double>(rep.base_lambdas));
  rep.value_decreased = true;
  std::vector<std::vector<double>> deltas(static_cast<std::size_t>(k));
  for (double eps : epsilons) {
    const auto cut = cut_corner(P, rep.component, rep.vertex, eps);
    CutRow row;
    row.epsilon = eps;
    row.lambdas = converged(cut.cut_polygon, beta, k, options);
    row.value = evaluate(objective, std::span<const double>(row.lambdas));
    row.d1_over_eps = (row.lambdas[0] - rep.base_lambdas[0]) / eps;
    row.d2_over_eps = (row.lambdas[1] - rep.base_lambdas[1]) / eps;
    for (int h = 0; h < k; ++h) deltas[h].push_back(row.lambdas[h] - rep.base_lambdas[h]);
    if (!(row.value < rep.base_value)) rep.value_decreased = false;
    rep.rows.push_back(std::move(row));
  }
  const LineFit f1 = least_squares(epsilons, deltas[0]);
  rep.slope1 = f1.slope;
  rep.r2 = f1.r2;
  rep.slope_higher = -std::numeric_limits<double>::infinity();
  for (int h = 1; h < k; ++h) rep.slope_higher = std::max(rep.slope_higher, least_squares(epsilons, deltas[h]).slope);

  const auto smallest = std::min_element(rep.rows.begin(), rep.rows.end(),
                                         [](const CutRow& a, const CutRow& b) { return a.epsilon < b.epsilon; });
  const double d1 = std::abs(smallest->d1_over_eps);
  rep.ratio2_smallest = std::abs(smallest->d2_over_eps) / d1;
  rep.ratio2_one_sided = std::max(smallest->d2_over_eps, 0.0) / d1;
  return rep;
}

FillReport fill_improves(const GeneralizedPolygon& P, const ObjectiveSpec& objective, int k, const SweepOptions& options) {
  if (!(objective.beta < 0.0)) throw Error(ErrorKind::InvalidParameter, "filling is compared for beta < 0");
  if (k < 1) throw Error(ErrorKind::InvalidParameter, "k must be at least 1");
  const int kk = std::max(k, objective.arity());
  FillReport rep;
  rep.filled = fill_holes(P);
  rep.lambdas = converged(P, objective.beta, kk, options);
  rep.filled_lambdas = converged(rep.filled, objective.beta, kk, options);
  rep.value = evaluate(objective, std::span<const double>(rep.lambdas));
  rep.filled_value = evaluate(objective, std::span<const double>(rep.filled_lambdas));
  rep.perimeter = generalized_perimeter(P);
  rep.filled_perimeter = generalized_perimeter(rep.filled);
  rep.area = area(P);
  rep.filled_area = area(rep.filled);
  rep.kth_negative = rep.lambdas[k - 1] < 0.0;
  rep.comparison_holds = true;
  if (rep.kth_negative) {
    for (int h = 0; h < k; ++h)
      if (rep.filled_lambdas[h] < rep.lambdas[h] - rep.tolerance) rep.comparison_holds = false;
  }
  return rep;
}

double vanishing_guard(double a, double eta) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidParameter, "area must be positive");
  if (!(eta > 0.0)) throw Error(ErrorKind::InvalidParameter, "eta must be positive");
  return -eta * 2.0 * std::sqrt(std::numbers::pi) / std::sqrt(a);
}

double vanishing_guard(const GeneralizedPolygon& P, double eta) { return vanishing_guard(area(P), eta); }

int component_bound(int N, double m, double eta, int k, double a_star) {
  if (!(a_star > 0.0)) throw Error(ErrorKind::InvalidParameter, "A* must be positive");
  if (!(eta > 0.0) || !(m > 0.0) || N < 3 || k < 1) throw Error(ErrorKind::InvalidParameter, "invalid component bound inputs");
  const int geometric = (N - 1) / 2;
  const double spectral = m * a_star * a_star / (4.0 * std::numbers::pi * eta * eta);
  if (spectral >= static_cast<double>(geometric)) return geometric;
  const int s = static_cast<int>(std::floor(spectral * (1.0 + 1e-12) + 1e-12)) + k;
  return std::min(geometric, s);
}

int component_bound(const GeneralizedPolygon& P, double eta, int k, double a_star) {
  return component_bound(P.side_budget(), area(P), eta, k, a_star);
}

double a_star(const ObjectiveSpec& objective, const std::vector<double>& reference) {
  const double target = evaluate(objective, std::span<const double>(reference));
  const int n = objective.arity();
  const auto at = [&](double A) {
    const std::vector<double> x(static_cast<std::size_t>(n), -A);
    return evaluate(objective, std::span<const double>(x));
  };
  double hi = 1.0;
  for (int i = 0; i < 200 && !(at(hi) < target); ++i) hi *= 2.0;
  if (!(at(hi) < target)) throw Error(ErrorKind::InvalidParameter, "F(-A, ..., -A) does not drop below the reference");
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (at(mid) < target ? hi : lo) = mid;
  }
  return 1.01 * hi;
}

}  // namespace robin
