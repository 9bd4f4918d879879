#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "robin/fem.hpp"

namespace robin {

enum class Direction { Minimize, Maximize };

/// Spectral functional F(lambda_1, ..., lambda_k). The direction follows the
/// sign of beta: minimize for beta > 0, maximize for beta < 0.
struct ObjectiveSpec {
  enum class Kind { FirstEigenvalue, SumFirstK, WeightedSum };
  Kind kind = Kind::FirstEigenvalue;
  int k = 1;
  std::vector<double> weights;  // WeightedSum only
  double beta = 1.0;

  static ObjectiveSpec first_eigenvalue(double beta);
  static ObjectiveSpec sum_first_k(int k, double beta);
  static ObjectiveSpec weighted_sum(std::vector<double> weights, double beta);

  /// Number of eigenvalues F depends on.
  int arity() const;
  Direction direction() const;
  std::string label() const;
};

/// F applied to the first arity() values. Throws InvalidParameter when too
/// few values are supplied.
double evaluate(const ObjectiveSpec& spec, std::span<const double> lambdas);
/// Uses the extrapolated eigenvalues when present. Throws InvalidParameter
/// on a beta mismatch or short spectrum.
double evaluate(const ObjectiveSpec& spec, const SpectrumResult& spectrum);

struct HypothesisReport {
  bool passed = true;
  std::string violation;        // empty when passed
  std::vector<double> witness;  // sample point exhibiting the violation
};

/// Numerical check of the hypotheses for the active sign of beta on a sample
/// grid. For beta > 0 the admissible set is the ordered positive cone
/// 0 < x1 <= ... <= xk; for beta < 0 it is all of R^k.
HypothesisReport hypothesis_check(const ObjectiveSpec& spec);
/// Throws RejectedSpec (with the witness in the message) when the check fails.
void require_hypotheses(const ObjectiveSpec& spec);

/// {"objective": "first_eigenvalue" | "sum_first_k" | "weighted_sum",
///  "k": int, "weights": [..], "beta": real}
ObjectiveSpec objective_from_json(const nlohmann::json& j);
nlohmann::json objective_to_json(const ObjectiveSpec& spec);

}  // namespace robin
