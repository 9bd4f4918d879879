// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every selected criterion passes.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "robin/error.hpp"
#include "robin/fem.hpp"
#include "robin/geometry.hpp"
#include "robin/harness.hpp"
#include "robin/mesh.hpp"
#include "robin/optimizer.hpp"
#include "robin/polygon_io.hpp"

using namespace robin;

namespace {

// Tolerances and budgets.
constexpr double kOracleRelTol = 1e-3;
constexpr double kOracleSeconds = 60.0;
constexpr double kNeumannTol = 1e-10;
constexpr double kScalingRelTol = 1e-10;
constexpr double kGuardTol = 1e-3;
constexpr double kCutR2 = 0.9;
constexpr double kCutSeconds = 600.0;
constexpr double kHigherRatio = 0.2;
constexpr double kFillTol = 1e-3;
constexpr double kDetachFinal = 1e-2;
constexpr double kAspectTol = 0.02;
constexpr double kRectangleSeconds = 900.0;
constexpr double kSaturationTol = 1e-8;
constexpr double kConservationTol = 1e-10;
constexpr double kHcResolution = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GeneralizedPolygon data(const std::string& name) { return load_polygon(std::string(ROBIN_DATA_DIR) + "/" + name); }

std::vector<GeneralizedPolygon> random_polygons(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GeneralizedPolygon> out;
  for (int i = 0; i < count; ++i) {
    const int n = 5 + i % 5;
    out.push_back(GeneralizedPolygon::from_simple(SimplePolygon(oracle::random_star(rng, n)), n,
                                                  "random_" + std::to_string(i)));
  }
  return out;
}

// ------------------------------------------------------------------- 1..4

Outcome separable_oracle() {
  Outcome o;
  o.pass = true;
  for (double beta : {0.5, 1.0, 5.0}) {
    const auto t0 = Clock::now();
    const auto s = converged_eigs(unit_square(), beta, 1, 3);
    const double secs = seconds_since(t0);
    const double exact = oracle::robin_square_lambda1(beta);
    const double rel = std::abs(s.extrapolated[0] - exact) / exact;
    o.pass = o.pass && rel <= kOracleRelTol && secs <= kOracleSeconds;
    o.detail += fmt("beta=%g rel=%.2e t=%.2fs; ", beta, rel, secs);
  }
  return o;
}

Outcome neumann_limit() {
  Outcome o;
  o.pass = true;
  std::vector<std::pair<GeneralizedPolygon, double>> cases{
      {unit_square(), 0.1}, {unit_square(), 0.03}, {data("slit_square.json"), 0.1}, {random_polygons(1, 77)[0], 0.08}};
  double worst = 0.0, worst_const = 0.0;
  for (const auto& [P, h] : cases) {
    const auto f = assemble(triangulate(P, h));
    const auto s = robin_eigs(f, 0.0, 2);
    const Eigen::VectorXd u = s.eigenvectors.col(0);
    const double spread = (u.array() - u.mean()).abs().maxCoeff() / std::abs(u.mean());
    worst = std::max(worst, std::abs(s.eigenvalues[0]));
    worst_const = std::max(worst_const, spread);
    o.pass = o.pass && std::abs(s.eigenvalues[0]) <= kNeumannTol && spread <= 1e-8;
  }
  const auto c = converged_eigs(unit_square(), 0.0, 1, 3);
  worst = std::max(worst, std::abs(c.extrapolated[0]));
  o.pass = o.pass && std::abs(c.extrapolated[0]) <= kNeumannTol;
  o.detail = fmt("max |lambda1|=%.2e, max eigenvector spread=%.2e over %zu meshes and one extrapolation", worst,
                 worst_const, cases.size());
  return o;
}

Outcome scaling_identity() {
  Outcome o;
  o.pass = true;
  double worst = 0.0;
  for (const auto& P : {data("slit_square.json"), random_polygons(1, 5)[0]}) {
    const auto base = triangulate(P, 0.1);
    const auto f = assemble(base);
    for (double t : {0.5, 2.0, 3.0}) {
      const auto g = assemble(scale_mesh(base, t));
      for (double beta : {1.0, -1.0}) {
        const auto a = robin_eigs(g, beta, 4);
        const auto b = robin_eigs(f, t * beta, 4);
        for (int k = 0; k < 4; ++k) {
          const double ref = b.eigenvalues[k] / (t * t);
          const double rel = std::abs(a.eigenvalues[k] - ref) / std::max(1.0, std::abs(ref));
          worst = std::max(worst, rel);
        }
      }
    }
  }
  o.pass = worst <= kScalingRelTol;
  o.detail = fmt("max relative deviation %.2e (t in {0.5,2,3}, beta in {1,-1}, k<=4)", worst);
  return o;
}

Outcome beta_monotonicity() {
  const auto f = assemble(triangulate(data("slit_square.json"), 0.1));
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back(robin_eigs(f, -5.0 + 10.0 * i / 9.0, 4).eigenvalues);
  Outcome o;
  o.pass = true;
  double min_gap1 = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (int k = 0; k < 4; ++k) {
      const double slack = 1e-12 * std::max(1.0, std::abs(rows[i][k]));
      if (rows[i][k] < rows[i - 1][k] - slack) o.pass = false;
    }
    min_gap1 = std::min(min_gap1, rows[i][0] - rows[i - 1][0]);
  }
  o.pass = o.pass && min_gap1 > 0.0;
  o.detail = fmt("beta grid -5..5 (10 points), lambda1 from %.4f to %.4f, smallest lambda1 step %.3e", rows.front()[0],
                 rows.back()[0], min_gap1);
  return o;
}

// -------------------------------------------------------------------- 5

Outcome negative_bound() {
  const double eta = 1.0;
  auto polys = random_polygons(5, 2024);
  polys.push_back(data("slit_square.json"));
  Outcome o;
  o.pass = true;
  double worst_discrete = -1e300, worst_guard = -1e300;
  for (const auto& P : polys) {
    const auto f = assemble(triangulate(P, 0.1));
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(f.K.rows());
    const double bound = -eta * generalized_perimeter(P) / area(P);
    const double rq = rayleigh(f, -eta, one);
    const double lam = robin_eigs(f, -eta, 1).eigenvalues[0];
    const bool identity = std::abs(rq - bound) <= 1e-10 * std::abs(bound);
    const bool discrete = lam <= rq + 1e-12 * std::abs(rq);
    worst_discrete = std::max(worst_discrete, lam - bound);

    const auto c = converged_eigs(P, -eta, 1, 3);
    const double guard = vanishing_guard(P, eta);
    const bool chain = c.extrapolated[0] <= bound + kGuardTol && c.extrapolated[0] <= guard + kGuardTol;
    worst_guard = std::max(worst_guard, c.extrapolated[0] - guard);
    o.pass = o.pass && identity && discrete && chain;
    o.notes.push_back(fmt("%s: lambda1_h=%.6f  -eta Per/|P|=%.6f  extrapolated=%.6f  guard=%.6f", P.name().c_str(), lam,
                          bound, c.extrapolated[0], guard));
  }
  o.detail = fmt("max(lambda1_h - bound)=%.3e, max(lambda1 - guard)=%.3e over %zu polygons", worst_discrete, worst_guard,
                 polys.size());
  return o;
}

// ------------------------------------------------------------------ 6, 7

std::vector<double> cut_epsilons() {
  std::vector<double> e;
  for (int j = 8; j >= 4; --j) e.push_back(std::ldexp(1.0, -j));
  return e;
}

const CutReport& cut_report(double* seconds = nullptr) {
  static std::optional<CutReport> rep;
  static double secs = 0.0;
  if (!rep) {
    const auto t0 = Clock::now();
    rep = cut_improves(unit_square(), ObjectiveSpec::first_eigenvalue(1.0), cut_epsilons());
    secs = seconds_since(t0);
  }
  if (seconds) *seconds = secs;
  return *rep;
}

Outcome cut_lemma() {
  double secs = 0.0;
  const auto& r = cut_report(&secs);
  Outcome o;
  o.pass = r.slope1 < 0.0 && r.r2 >= kCutR2 && secs <= kCutSeconds;
  o.detail = fmt("slope=%.4f R2=%.4f t=%.1fs", r.slope1, r.r2, secs);
  for (const auto& row : r.rows)
    o.notes.push_back(fmt("eps=%.6f  dl1/eps=%.4f  dl2/eps=%.4f", row.epsilon, row.d1_over_eps, row.d2_over_eps));
  return o;
}

Outcome higher_cut_bound() {
  const auto& r = cut_report();
  Outcome o;
  o.pass = r.ratio2_smallest <= kHigherRatio;
  o.detail = fmt("|dl2|/|dl1| at eps=2^-8 is %.3f (limit %.2f)", r.ratio2_smallest, kHigherRatio);
  o.notes.push_back(fmt("one-sided ratio max(dl2,0)/|dl1| = %.3f", r.ratio2_one_sided));
  o.notes.push_back(fmt("largest fitted slope of dl_h, h>=2: %.4f", r.slope_higher));
  return o;
}

// -------------------------------------------------------------------- 8

Outcome filling() {
  const auto P = data("slit_square.json");
  const auto r = fill_improves(P, ObjectiveSpec::first_eigenvalue(-1.0), 1);
  Outcome o;
  o.pass = r.filled_lambdas[0] >= r.lambdas[0] - kFillTol && r.filled_perimeter <= r.perimeter;
  o.detail = fmt("lambda1(P)=%.6f lambda1(filled)=%.6f Per(P)=%.4f Per(filled)=%.4f", r.lambdas[0], r.filled_lambdas[0],
                 r.perimeter, r.filled_perimeter);
  return o;
}

// -------------------------------------------------------------------- 9

std::vector<double> detach_epsilons() {
  std::vector<double> e;
  for (int j = 3; j <= 7; ++j) e.push_back(std::ldexp(1.0, -j));
  return e;
}

std::vector<double> detach_gaps(const DetachReport& rep) {
  std::vector<double> g;
  for (const auto& r : rep.rows) g.push_back(std::abs(r.lambdas[0] - rep.base_lambdas[0]));
  return g;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += fmt("%s%.3e", s.empty() ? "" : " ", x);
  return s;
}

Outcome detachment() {
  const auto P = data("slit_square.json");
  const auto rep = detach_sweep(P, detach_epsilons(), 1.0, 1, StudyOptions{});
  const auto gaps = detach_gaps(rep);
  Outcome o;
  bool monotone = true, measures = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] < gaps[i - 1];
  for (const auto& r : rep.rows)
    measures = measures && r.area <= rep.base_area && r.gen_perimeter <= rep.base_perimeter + 1e-14;
  o.pass = monotone && measures && gaps.back() <= kDetachFinal;
  o.detail = fmt("beta=1, |dl1| for j=3..7: %s; monotone=%s, measures non-increasing=%s", join(gaps).c_str(),
                 monotone ? "yes" : "no", measures ? "yes" : "no");
  for (const auto& r : rep.rows)
    o.notes.push_back(fmt("eps=%.6f area=%.6f Per=%.6f lambda1=%.6f", r.epsilon, r.area, r.gen_perimeter, r.lambdas[0]));
  for (double beta : {5.0, -1.0}) {
    const auto d = detach_sweep(P, detach_epsilons(), beta, 1, StudyOptions{});
    o.notes.push_back(fmt("beta=%g: |dl1| for j=3..7: %s", beta, join(detach_gaps(d)).c_str()));
  }
  return o;
}

// --------------------------------------------------------------- 10, 11

OptimizationProblem config(const std::string& name) {
  std::ifstream is(std::string(ROBIN_DATA_DIR) + "/" + name);
  return problem_from_json(nlohmann::json::parse(is));
}

const OptimizationResult& rectangle_run(double* seconds = nullptr) {
  static std::optional<OptimizationResult> res;
  static double secs = 0.0;
  if (!res) {
    const auto t0 = Clock::now();
    res = optimize(config("rectangle_beta1.json"));
    secs = seconds_since(t0);
  }
  if (seconds) *seconds = secs;
  return *res;
}

Outcome rectangle_optimum() {
  double secs = 0.0;
  const auto& r = rectangle_run(&secs);
  const auto bb = r.best_polygon.bbox();
  const double w = bb.hi.x - bb.lo.x, h = bb.hi.y - bb.lo.y;
  const double aspect = std::max(w / h, h / w);
  Outcome o;
  o.pass = aspect - 1.0 <= kAspectTol && secs <= kRectangleSeconds;
  o.detail = fmt("%.6f x %.6f, aspect %.5f, certified lambda1 %.6f, t=%.1fs", w, h, aspect, r.certified_value, secs);
  return o;
}

Outcome saturation() {
  struct Run {
    std::string label;
    OptimizationProblem problem;
  };
  std::vector<Run> runs;
  runs.push_back({"rectangle, area", config("rectangle_beta1.json")});
  runs.push_back({"pentagon, area", config("pentagon_beta1.json")});
  auto per = config("pentagon_beta1.json");
  per.constraint = ConstraintSpec::perimeter(4.0);
  per.objective = ObjectiveSpec::first_eigenvalue(1.0);
  per.side_budget = 4;
  per.max_iters = 30;
  runs.push_back({"quadrilateral, perimeter", per});

  Outcome o;
  o.pass = true;
  double worst = 0.0;
  for (const auto& run : runs) {
    const auto& r = run.label == "rectangle, area" ? rectangle_run() : optimize(run.problem);
    const double dev = std::abs(run.problem.constraint.measure(r.best_polygon) - run.problem.constraint.bound);
    worst = std::max(worst, dev);
    o.pass = o.pass && dev <= kSaturationTol && r.saturated;
    o.notes.push_back(fmt("%s: |constraint - bound| = %.2e, F = %.6f", run.label.c_str(), dev, r.certified_value));
  }
  o.detail = fmt("max constraint deviation %.2e over %zu runs", worst, runs.size());
  return o;
}

// ------------------------------------------------------------------- 12

Outcome conservation() {
  std::vector<GeneralizedPolygon> polys{unit_square(), data("slit_square.json"), data("mountains_limit.json"),
                                        rectangle(2.0, 0.5)};
  for (Family f : {Family::Pacman, Family::Mountains, Family::ShrinkingSlit}) polys.push_back(family_member(f, 2));
  for (auto& P : random_polygons(5, 12)) polys.push_back(P);
  for (Family f : {Family::Pacman, Family::ShrinkingSlit}) polys.push_back(family_limit(f));

  Outcome o;
  double worst = 0.0;
  for (const auto& P : polys) {
    for (bool refined : {false, true}) {
      auto m = triangulate(P, 0.1);
      if (refined) m = refine(m);
      const auto s = mesh_stats(m);
      const auto f = assemble(m);
      const Eigen::VectorXd one = Eigen::VectorXd::Ones(f.B.rows());
      const double per = generalized_perimeter(P);
      worst = std::max({worst, std::abs(s.total_area - area(P)), std::abs(s.boundary_length - per),
                        std::abs(one.dot(f.B * one) - per), std::abs(one.dot(f.M * one) - area(P))});
    }
  }
  o.pass = worst <= kConservationTol;
  o.detail = fmt("max deviation %.2e over %zu polygons, base and refined meshes", worst, polys.size());
  return o;
}

// ------------------------------------------------------------------- 13

std::vector<GeneralizedPolygon> hc_corpus() {
  std::vector<GeneralizedPolygon> c;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int i = 0; i < 14; ++i)
    c.push_back(GeneralizedPolygon::from_simple(SimplePolygon(oracle::random_star(rng, 5 + i % 4, {u(rng), u(rng)})),
                                                8));
  c.push_back(unit_square());
  c.push_back(data("slit_square.json"));
  c.push_back(rectangle(1.2, 0.8));
  c.push_back(family_member(Family::Pacman, 1));
  c.push_back(family_limit(Family::Mountains));
  c.push_back(family_member(Family::Mountains, 1));
  return c;
}

Outcome hc_metric() {
  const auto c = hc_corpus();
  const double res = kHcResolution;
  const double slack = 2.0 * res;
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  std::map<std::pair<std::size_t, std::size_t>, double> cache;
  const auto d = [&](std::size_t i, std::size_t j) {
    auto it = cache.find({i, j});
    if (it == cache.end()) it = cache.emplace(std::make_pair(i, j), hc_distance(c[i], c[j], res)).first;
    return it->second;
  };

  Outcome o;
  int bad_identity = 0, bad_symmetry = 0, bad_triangle = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (d(i, i) > slack) ++bad_identity;
  int pairs = 0;
  while (pairs < 50) {
    const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    if (i == j) continue;
    ++pairs;
    if (std::abs(d(i, j) - d(j, i)) > slack) ++bad_symmetry;
    if (d(i, k) > d(i, j) + d(j, k) + slack) ++bad_triangle;
    if (d(i, j) <= slack) ++bad_identity;  // distinct sets are apart
  }

  bool families = true;
  for (Family f : {Family::Pacman, Family::Mountains}) {
    const auto limit = family_limit(f);
    std::vector<double> ds;
    for (int n = 0; n < 5; ++n) ds.push_back(hc_distance(family_member(f, n), limit, family_parameter(f, n) / 8));
    bool dec = true;
    for (std::size_t n = 1; n < ds.size(); ++n) dec = dec && ds[n] < ds[n - 1];
    const bool small = ds.back() <= 0.1 * ds.front();
    families = families && dec && small;
    o.notes.push_back(fmt("%s: distances to the limit %s", to_string(f).c_str(), join(ds).c_str()));
  }
  o.pass = bad_identity == 0 && bad_symmetry == 0 && bad_triangle == 0 && families;
  o.detail = fmt("%d pairs, violations: identity %d, symmetry %d, triangle %d; families %s", pairs, bad_identity,
                 bad_symmetry, bad_triangle, families ? "converge" : "do not converge");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  bool verbose = true;
  app.add_option("--only", only, "Criteria to run (default: all)")->check(CLI::Range(1, 13));
  app.add_flag("!--quiet", verbose, "Hide per-criterion notes");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "separable oracle on the unit square", separable_oracle},
      {2, "zero parameter gives lambda1 = 0", neumann_limit},
      {3, "scaling identity on matched meshes", scaling_identity},
      {4, "monotonicity in beta", beta_monotonicity},
      {5, "negative-parameter upper bound and vanishing guard", negative_bound},
      {6, "corner cut lowers lambda1 linearly", cut_lemma},
      {7, "corner cut moves lambda2 by o(eps)", higher_cut_bound},
      {8, "filling comparison for eta = 1", filling},
      {9, "crack detachment approximation", detachment},
      {10, "rectangle optimum is the square", rectangle_optimum},
      {11, "constraint saturation for beta > 0", saturation},
      {12, "mesh conservation of area and perimeter", conservation},
      {13, "hc distance metric properties and family limits", hc_metric},
  };

  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failed;
    std::cout << fmt("criterion %2d: %s  %s | %s", c.id, out.pass ? "PASS" : "FAIL", c.title.c_str(), out.detail.c_str())
              << std::endl;
    if (verbose)
      for (const auto& n : out.notes) std::cout << "    " << n << '\n';
  }
  std::cout << fmt("%d of %d criteria passed", ran - failed, ran) << std::endl;
  return failed == 0 ? 0 : 1;
}
