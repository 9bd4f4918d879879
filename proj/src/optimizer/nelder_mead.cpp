#include <algorithm>
#include <cmath>
#include <numeric>

#include "robin/optimizer.hpp"

namespace robin {

namespace {

using Vec = std::vector<double>;

Vec affine(const Vec& a, const Vec& b, double t) {  // a + t (b - a)
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
  return r;
}

double simplex_diameter(const std::vector<Vec>& s) {
  double d = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < s[0].size(); ++j) sq += (s[i][j] - s[0][j]) * (s[i][j] - s[0][j]);
    d = std::max(d, std::sqrt(sq));
  }
  return d;
}

}  // namespace

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                const NelderMeadOptions& opt, NelderMeadTrace* trace, const NelderMeadHooks& hooks) {
  const std::size_t n = x0.size();
  std::vector<Vec> s(n + 1);
  Vec fs(n + 1);
  int evaluations = 0;
  const auto eval = [&](const Vec& x) {
    ++evaluations;
    return f(x);
  };
  const auto build = [&](const Vec& centre) {
    s[0] = centre;
    for (std::size_t i = 0; i < n; ++i) {
      s[i + 1] = centre;
      s[i + 1][i] += opt.initial_step;
    }
    for (std::size_t i = 0; i <= n; ++i) fs[i] = eval(s[i]);
  };
  build(x0);

  std::vector<std::size_t> order(n + 1);
  const auto sort_simplex = [&]() {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<Vec> s2(n + 1);
    Vec f2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s2[i] = std::move(s[order[i]]);
      f2[i] = fs[order[i]];
    }
    s = std::move(s2);
    fs = std::move(f2);
  };
  sort_simplex();

  Vec best = s[0];
  double best_f = fs[0];
  int since_improvement = 0, rebuilds = 0, idle_rebuilds = 0;
  double best_at_rebuild = best_f;

  for (int it = 0; it < opt.max_iters; ++it) {
    const bool collapsed = simplex_diameter(s) < opt.restart_tol * opt.initial_step;
    if (collapsed || since_improvement >= opt.stall_iters) {
      idle_rebuilds = best_f < best_at_rebuild ? 0 : idle_rebuilds + 1;
      if (idle_rebuilds > opt.max_rebuilds) break;
      best_at_rebuild = best_f;
      if (hooks.on_rebuild) hooks.on_rebuild(rebuilds);
      ++rebuilds;
      build(best);
      sort_simplex();
      best = s[0];
      best_f = fs[0];
      since_improvement = 0;
    }

    Vec centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += s[i][j] / static_cast<double>(n);

    const Vec xr = affine(centroid, s[n], -1.0);
    const double fr = eval(xr);
    if (fr < fs[0]) {
      const Vec xe = affine(centroid, s[n], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        s[n] = xe;
        fs[n] = fe;
      } else {
        s[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      s[n] = xr;
      fs[n] = fr;
    } else {
      const bool outside = fr < fs[n];
      const Vec xc = outside ? affine(centroid, s[n], -0.5) : affine(centroid, s[n], 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fs[n])) {
        s[n] = xc;
        fs[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          s[i] = affine(s[0], s[i], 0.5);
          fs[i] = eval(s[i]);
        }
      }
    }
    sort_simplex();
    if (fs[0] < best_f) {
      best_f = fs[0];
      best = s[0];
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (trace) {
      trace->best_value.push_back(best_f);
      trace->best_point.push_back(best);
    }
    if (hooks.on_iteration) hooks.on_iteration(it);
  }
  if (trace) {
    trace->evaluations = evaluations;
    trace->rebuilds = rebuilds;
  }
  return best;
}

}  // namespace robin
