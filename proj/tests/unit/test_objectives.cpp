#include <doctest.h>

#include <vector>

#include "robin/error.hpp"
#include "robin/objectives.hpp"

using namespace robin;

TEST_SUITE("objectives") {

TEST_CASE("evaluation") {
  const std::vector<double> l{1.0, 2.0, 4.0};
  CHECK(evaluate(ObjectiveSpec::first_eigenvalue(1.0), l) == 1.0);
  CHECK(evaluate(ObjectiveSpec::sum_first_k(3, 1.0), l) == 7.0);
  CHECK(evaluate(ObjectiveSpec::weighted_sum({2.0, 0.5}, 1.0), l) == 3.0);
  CHECK_THROWS_AS(evaluate(ObjectiveSpec::sum_first_k(4, 1.0), l), Error);
}

TEST_CASE("direction follows the sign of beta") {
  CHECK(ObjectiveSpec::first_eigenvalue(1.0).direction() == Direction::Minimize);
  CHECK(ObjectiveSpec::first_eigenvalue(-1.0).direction() == Direction::Maximize);
  CHECK(ObjectiveSpec::sum_first_k(3, 1.0).arity() == 3);
  CHECK(ObjectiveSpec::weighted_sum({1, 1, 1, 1}, 1.0).arity() == 4);
}

TEST_CASE("spectrum evaluation prefers extrapolated values and checks beta") {
  SpectrumResult s;
  s.beta = 2.0;
  s.eigenvalues = {3.0, 4.0};
  CHECK(evaluate(ObjectiveSpec::sum_first_k(2, 2.0), s) == 7.0);
  s.extrapolated = {2.5, 3.5};
  CHECK(evaluate(ObjectiveSpec::sum_first_k(2, 2.0), s) == 6.0);
  CHECK_THROWS_AS(evaluate(ObjectiveSpec::sum_first_k(2, 1.0), s), Error);
}

TEST_CASE("standard functionals satisfy the hypotheses") {
  for (double beta : {2.0, -2.0}) {
    CHECK(hypothesis_check(ObjectiveSpec::first_eigenvalue(beta)).passed);
    CHECK(hypothesis_check(ObjectiveSpec::sum_first_k(3, beta)).passed);
    CHECK(hypothesis_check(ObjectiveSpec::weighted_sum({1.0, 0.5, 0.25}, beta)).passed);
  }
}

TEST_CASE("functionals violating the hypotheses are rejected with a witness") {
  const auto decreasing = ObjectiveSpec::weighted_sum({1.0, -2.0}, 1.0);
  const auto r = hypothesis_check(decreasing);
  CHECK_FALSE(r.passed);
  CHECK(r.witness.size() == 2);
  CHECK_THROWS_AS(require_hypotheses(decreasing), Error);

  // No dependence on lambda_1 for beta > 0.
  CHECK_FALSE(hypothesis_check(ObjectiveSpec::weighted_sum({0.0, 1.0}, 1.0)).passed);
  // Not coercive in lambda_2 for beta < 0.
  CHECK_FALSE(hypothesis_check(ObjectiveSpec::weighted_sum({1.0, 0.0}, -1.0)).passed);
  CHECK_FALSE(hypothesis_check(ObjectiveSpec::first_eigenvalue(0.0)).passed);

  try {
    require_hypotheses(decreasing);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RejectedSpec);
  }
}

TEST_CASE("JSON round trip") {
  const auto s = ObjectiveSpec::weighted_sum({1.0, 3.0}, -0.5);
  const auto t = objective_from_json(objective_to_json(s));
  CHECK(t.kind == s.kind);
  CHECK(t.weights == s.weights);
  CHECK(t.beta == s.beta);
  CHECK_THROWS_AS(objective_from_json({{"objective", "max_gap"}, {"beta", 1.0}}), Error);
}

}  // TEST_SUITE
