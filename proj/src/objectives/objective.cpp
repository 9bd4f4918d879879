#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "robin/error.hpp"
#include "robin/objectives.hpp"

namespace robin {

ObjectiveSpec ObjectiveSpec::first_eigenvalue(double beta) {
  ObjectiveSpec s;
  s.kind = Kind::FirstEigenvalue;
  s.k = 1;
  s.beta = beta;
  return s;
}

ObjectiveSpec ObjectiveSpec::sum_first_k(int k, double beta) {
  if (k < 1) throw Error(ErrorKind::InvalidParameter, "k must be at least 1");
  ObjectiveSpec s;
  s.kind = Kind::SumFirstK;
  s.k = k;
  s.beta = beta;
  return s;
}

ObjectiveSpec ObjectiveSpec::weighted_sum(std::vector<double> weights, double beta) {
  if (weights.empty()) throw Error(ErrorKind::InvalidParameter, "weighted sum needs at least one weight");
  for (double w : weights)
    if (!std::isfinite(w)) throw Error(ErrorKind::InvalidParameter, "weights must be finite");
  ObjectiveSpec s;
  s.kind = Kind::WeightedSum;
  s.k = static_cast<int>(weights.size());
  s.weights = std::move(weights);
  s.beta = beta;
  return s;
}

int ObjectiveSpec::arity() const { return kind == Kind::FirstEigenvalue ? 1 : k; }

Direction ObjectiveSpec::direction() const { return beta < 0.0 ? Direction::Maximize : Direction::Minimize; }

std::string ObjectiveSpec::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::FirstEigenvalue: os << "first_eigenvalue"; break;
    case Kind::SumFirstK: os << "sum_first_" << k; break;
    case Kind::WeightedSum:
      os << "weighted_sum(";
      for (std::size_t i = 0; i < weights.size(); ++i) os << (i ? "," : "") << weights[i];
      os << ")";
      break;
  }
  return os.str();
}

double evaluate(const ObjectiveSpec& spec, std::span<const double> lambdas) {
  const auto n = static_cast<std::size_t>(spec.arity());
  if (lambdas.size() < n) throw Error(ErrorKind::InvalidParameter, "objective needs " + std::to_string(n) + " eigenvalues");
  switch (spec.kind) {
    case ObjectiveSpec::Kind::FirstEigenvalue: return lambdas[0];
    case ObjectiveSpec::Kind::SumFirstK: return std::accumulate(lambdas.begin(), lambdas.begin() + n, 0.0);
    case ObjectiveSpec::Kind::WeightedSum: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += spec.weights[i] * lambdas[i];
      return s;
    }
  }
  return 0.0;
}

double evaluate(const ObjectiveSpec& spec, const SpectrumResult& spectrum) {
  if (std::abs(spectrum.beta - spec.beta) > 1e-12 * (1.0 + std::abs(spec.beta)))
    throw Error(ErrorKind::InvalidParameter, "spectrum was computed for a different beta");
  const auto& v = spectrum.extrapolated.empty() ? spectrum.eigenvalues : spectrum.extrapolated;
  return evaluate(spec, std::span<const double>(v));
}

namespace {

std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

HypothesisReport fail(std::string what, std::vector<double> witness) {
  HypothesisReport r;
  r.passed = false;
  r.violation = std::move(what);
  r.witness = std::move(witness);
  return r;
}

// Sample points of the admissible set: ordered positive cone for beta > 0,
// a symmetric grid of R^k otherwise.
std::vector<std::vector<double>> samples(int k, bool ordered_positive) {
  const std::vector<double> levels = ordered_positive ? std::vector<double>{0.5, 2.0, 10.0, 100.0}
                                                      : std::vector<double>{-50.0, -2.0, 0.0, 3.0, 40.0};
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  const std::size_t cap = 4096;
  while (out.size() < cap) {
    std::vector<double> x(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) x[i] = levels[idx[i]];
    if (!ordered_positive || std::is_sorted(x.begin(), x.end())) out.push_back(x);
    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == levels.size()) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  return out;
}

}  // namespace

HypothesisReport hypothesis_check(const ObjectiveSpec& spec) {
  if (spec.beta == 0.0 || !std::isfinite(spec.beta)) return fail("beta must be nonzero and finite", {});
  const int k = spec.arity();
  const auto F = [&](const std::vector<double>& x) { return evaluate(spec, std::span<const double>(x)); };
  const bool positive = spec.beta > 0.0;
  const double delta = 1e-3;

  for (const auto& x : samples(k, positive)) {
    const double f0 = F(x);
    if (!std::isfinite(f0)) return fail("F is not finite", x);
    for (int i = 0; i < k; ++i) {
      auto y = x;
      y[i] += delta;
      const double f1 = F(y);
      if (f1 < f0 - 1e-12 * (1.0 + std::abs(f0))) return fail("F decreases in variable " + std::to_string(i + 1), x);
      if (positive && i == 0 && !((f1 - f0) / delta > 1e-9)) return fail("dF/dx1 is not strictly positive", x);
    }
  }

  const std::vector<double> ts{1e2, 1e4, 1e6};
  if (positive) {
    // Extreme rays of the ordered cone: (0..0, 1..1).
    for (int first = 0; first < k; ++first) {
      std::vector<double> d(static_cast<std::size_t>(k), 0.0);
      for (int j = first; j < k; ++j) d[j] = 1.0;
      double prev = -std::numeric_limits<double>::infinity();
      for (double t : ts) {
        std::vector<double> x(d.size());
        for (std::size_t j = 0; j < d.size(); ++j) x[j] = 1.0 + t * d[j];
        const double f = F(x);
        if (!(f > prev + 1.0)) return fail("F does not tend to +infinity along an unbounded direction", x);
        prev = f;
      }
      if (!(prev > 1e4)) return fail("F does not tend to +infinity along an unbounded direction", std::vector<double>(d));
    }
  } else {
    for (int j = 0; j < k; ++j) {
      double prev = std::numeric_limits<double>::infinity();
      for (double t : ts) {
        std::vector<double> x(static_cast<std::size_t>(k), 1.0);
        x[j] = -t;
        const double f = F(x);
        if (!(f < prev - 1.0)) return fail("F does not tend to -infinity as variable " + std::to_string(j + 1) + " does", x);
        prev = f;
      }
      if (!(prev < -1e4)) {
        std::vector<double> x(static_cast<std::size_t>(k), 1.0);
        x[j] = -ts.back();
        return fail("F does not tend to -infinity as variable " + std::to_string(j + 1) + " does", x);
      }
    }
  }
  return {};
}

void require_hypotheses(const ObjectiveSpec& spec) {
  const auto r = hypothesis_check(spec);
  if (!r.passed) throw Error(ErrorKind::RejectedSpec, spec.label() + ": " + r.violation + " at " + format_point(r.witness));
}

ObjectiveSpec objective_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("objective").get<std::string>();
    const double beta = j.at("beta").get<double>();
    if (kind == "first_eigenvalue") return ObjectiveSpec::first_eigenvalue(beta);
    if (kind == "sum_first_k") return ObjectiveSpec::sum_first_k(j.at("k").get<int>(), beta);
    if (kind == "weighted_sum") return ObjectiveSpec::weighted_sum(j.at("weights").get<std::vector<double>>(), beta);
    throw Error(ErrorKind::InvalidParameter, "unknown objective '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("objective: ") + e.what());
  }
}

nlohmann::json objective_to_json(const ObjectiveSpec& spec) {
  nlohmann::json j;
  switch (spec.kind) {
    case ObjectiveSpec::Kind::FirstEigenvalue: j["objective"] = "first_eigenvalue"; break;
    case ObjectiveSpec::Kind::SumFirstK:
      j["objective"] = "sum_first_k";
      j["k"] = spec.k;
      break;
    case ObjectiveSpec::Kind::WeightedSum:
      j["objective"] = "weighted_sum";
      j["weights"] = spec.weights;
      break;
  }
  j["beta"] = spec.beta;
  return j;
}

}  // namespace robin
