#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "robin/error.hpp"
#include "robin/optimizer.hpp"
#include "robin/polygon_io.hpp"

using namespace robin;

namespace {

OptimizationProblem small_problem(double beta, SearchSpace space) {
  OptimizationProblem p;
  p.objective = ObjectiveSpec::first_eigenvalue(beta);
  p.constraint = ConstraintSpec::area(1.0);
  p.side_budget = 4;
  p.restarts = 2;
  p.seed = 9;
  p.mesh_h = 0.12;
  p.max_iters = 15;
  p.space = space;
  p.certify_levels = 2;
  p.threads = 2;
  return p;
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("Nelder-Mead minimizes a quadratic and Rosenbrock") {
  NelderMeadOptions o;
  o.max_iters = 2000;
  o.initial_step = 0.5;
  const auto q = nelder_mead([](const std::vector<double>& x) { return std::pow(x[0] - 1, 2) + 3 * std::pow(x[1] + 2, 2); },
                             {0.0, 0.0}, o);
  CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(q[1] == doctest::Approx(-2.0).epsilon(1e-4));

  NelderMeadTrace trace;
  const auto r = nelder_mead(
      [](const std::vector<double>& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); },
      {-1.2, 1.0}, o, &trace);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-3));
  for (std::size_t i = 1; i < trace.best_value.size(); ++i) CHECK(trace.best_value[i] <= trace.best_value[i - 1]);
}

TEST_CASE("Nelder-Mead skips rejected points") {
  NelderMeadOptions o;
  o.max_iters = 500;
  const auto x = nelder_mead(
      [](const std::vector<double>& v) {
        return v[0] < 0.5 ? std::numeric_limits<double>::infinity() : std::pow(v[0] - 0.2, 2);
      },
      {1.0}, o);
  CHECK(x[0] >= 0.5);
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("positive beta runs saturate the constraint") {
  const auto r = optimize(small_problem(1.0, SearchSpace::AxisRectangle));
  CHECK(r.saturated);
  CHECK(std::abs(area(r.best_polygon) - 1.0) <= 1e-8);
  CHECK_FALSE(r.history.empty());
  CHECK(r.restart_best.size() == 2);
  CHECK_FALSE(r.strategy.empty());

  auto pp = small_problem(1.0, SearchSpace::FreePolygon);
  pp.constraint = ConstraintSpec::perimeter(4.0);
  pp.side_budget = 5;
  const auto s = optimize(pp);
  CHECK(std::abs(generalized_perimeter(s.best_polygon) - 4.0) <= 1e-8);
}

TEST_CASE("runs are deterministic for a fixed seed") {
  auto p = small_problem(1.0, SearchSpace::FreePolygon);
  const auto a = optimize(p);
  p.threads = 1;
  const auto b = optimize(p);
  CHECK(a.best_value == b.best_value);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) CHECK(a.history[i].value == b.history[i].value);
}

TEST_CASE("negative beta runs end feasible") {
  auto p = small_problem(-1.0, SearchSpace::FreePolygon);
  const auto r = optimize(p);
  CHECK(area(r.best_polygon) <= 1.0 + 1e-8);
  CHECK(r.certified_value <= vanishing_guard(r.best_polygon, 1.0) + 1e-3);
}

TEST_CASE("history output") {
  const auto r = optimize(small_problem(1.0, SearchSpace::AxisRectangle));
  std::ostringstream os;
  write_history_csv(os, r);
  CHECK(os.str().rfind("iter,value,feasible,area,gen_perimeter\n", 0) == 0);
  const auto j = result_to_json(r, small_problem(1.0, SearchSpace::AxisRectangle));
  CHECK(j.contains("best_polygon"));
}

TEST_CASE("run configs") {
  const auto j = nlohmann::json::parse(R"({"problem": {"N":5, "beta":1.0,
      "constraint":{"kind":"area","bound":1.0}, "objective":{"objective":"first_eigenvalue"},
      "restarts":8, "seed":42, "mesh_h":0.05, "max_iters":400}})");
  const auto p = problem_from_json(j);
  CHECK(p.side_budget == 5);
  CHECK(p.restarts == 8);
  CHECK(p.seed == 42);
  CHECK(p.objective.beta == 1.0);
  const auto q = problem_from_json(problem_to_json(p));
  CHECK(q.max_iters == 400);
  CHECK(q.constraint.bound == 1.0);
  auto bad = j;
  bad["problem"]["constraint"]["kind"] = "volume";
  CHECK_THROWS_AS(problem_from_json(bad), Error);
}

TEST_CASE("rejected objectives stop the run") {
  auto p = small_problem(1.0, SearchSpace::FreePolygon);
  p.objective = ObjectiveSpec::weighted_sum({1.0, -1.0}, 1.0);
  try {
    optimize(p);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RejectedSpec);
  }
}

TEST_CASE("vanishing guard and component bound") {
  CHECK(vanishing_guard(1.0, 1.0) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)));
  CHECK(vanishing_guard(4.0, 0.5) == doctest::Approx(-0.5 * std::sqrt(std::numbers::pi)));
  CHECK_THROWS_AS(vanishing_guard(0.0, 1.0), Error);
  // min{floor(6/2), floor(1 * 1 / (4 pi)) + 1} = 1
  CHECK(component_bound(7, 1.0, 1.0, 1, 1.0) == 1);
  // floor(100 * 4 / (4 pi)) + 2 = 33, capped by floor(8/2) = 4
  CHECK(component_bound(9, 100.0, 1.0, 2, 2.0) == 4);
  // floor(1 * 36 / (4 pi)) + 1 = 3
  CHECK(component_bound(11, 1.0, 1.0, 1, 6.0) == 3);
}

TEST_CASE("A* for the first eigenvalue is the reference magnitude") {
  const double a = a_star(ObjectiveSpec::first_eigenvalue(-1.0), {-3.0});
  CHECK(a == doctest::Approx(3.03).epsilon(1e-6));
  const double b = a_star(ObjectiveSpec::sum_first_k(2, -1.0), {-3.0, 1.0});
  CHECK(b == doctest::Approx(1.01).epsilon(1e-6));
}

TEST_CASE("thread count") {
  CHECK(thread_count(3) == 3);
  CHECK(thread_count(0) >= 1);
}

}  // TEST_SUITE
