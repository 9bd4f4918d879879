#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "robin/fem.hpp"
#include "robin/geometry.hpp"
#include "robin/objectives.hpp"

namespace robin {

// ---------------------------------------------------------------- Nelder-Mead

struct NelderMeadOptions {
  int max_iters = 400;
  double initial_step = 0.1;
  /// Simplex diameter (relative to initial_step) below which the simplex is
  /// rebuilt around the best vertex.
  double restart_tol = 1e-3;
  /// Iterations without a strict improvement that also trigger a rebuild.
  int stall_iters = 60;
  /// Rebuilds without improvement before giving up.
  int max_rebuilds = 3;
};

struct NelderMeadTrace {
  std::vector<double> best_value;  // best so far after each iteration
  std::vector<std::vector<double>> best_point;
  int evaluations = 0;
  int rebuilds = 0;
};

struct NelderMeadHooks {
  /// Called after every iteration with the iteration index.
  std::function<void(int)> on_iteration;
  /// Called before the simplex is rebuilt; the objective may change here
  /// (all vertices are re-evaluated afterwards).
  std::function<void(int)> on_rebuild;
};

/// Minimizes f; infinite values mark rejected points.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                const NelderMeadOptions& options, NelderMeadTrace* trace = nullptr,
                                const NelderMeadHooks& hooks = {});

// ------------------------------------------------------------------ optimize

enum class SearchSpace { FreePolygon, AxisRectangle };

struct OptimizationProblem {
  ObjectiveSpec objective;
  ConstraintSpec constraint;
  int side_budget = 4;
  int restarts = 4;
  std::uint64_t seed = 42;
  double mesh_h = 0.05;
  int max_iters = 400;
  SearchSpace space = SearchSpace::FreePolygon;
  /// Refinement levels of the final certification solve.
  int certify_levels = 3;
  /// Worker threads for restarts; 0 reads ROBIN_THREADS, else hardware.
  int threads = 0;
};

struct HistoryEntry {
  int iter = 0;
  int restart = 0;
  double value = 0.0;  // best so far (global, in restart order)
  bool feasible = true;
  double area = 0.0;
  double gen_perimeter = 0.0;
};

struct OptimizationResult {
  GeneralizedPolygon best_polygon;
  double best_value = 0.0;
  SpectrumResult spectrum;      // certified on nested refinements
  double certified_value = 0.0;  // F on the certified spectrum
  double constraint_residual = 0.0;
  std::vector<HistoryEntry> history;
  bool saturated = false;
  std::vector<double> restart_best;
  int best_restart = 0;
  int rejected_candidates = 0;
  std::string strategy;
};

/// Multi-start Nelder-Mead over the vertex coordinates of a simple N-gon, or
/// over (width, height) for axis-aligned rectangles. For beta > 0 every
/// candidate is dilated onto the constraint before evaluation; for beta < 0
/// the constraint is a quadratic penalty followed by a final scaling
/// projection. Throws OptimizationFailure when no restart finds a feasible
/// point.
OptimizationResult optimize(const OptimizationProblem& problem);

/// Value of F for one candidate at the problem's mesh size (no
/// certification); nullopt when the candidate is rejected.
std::optional<double> evaluate_candidate(const OptimizationProblem& problem, const GeneralizedPolygon& P);

void write_history_csv(std::ostream& os, const OptimizationResult& result);
nlohmann::json result_to_json(const OptimizationResult& result, const OptimizationProblem& problem);

/// {"problem": {"N":5, "beta":1.0, "constraint":{"kind":"area","bound":1.0,"convex":false},
///  "objective":{"objective":"first_eigenvalue"}, "restarts":8, "seed":42, "mesh_h":0.05,
///  "max_iters":400, "search":"polygon"|"rectangle"}}
OptimizationProblem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const OptimizationProblem& problem);

int thread_count(int requested);

// --------------------------------------------------------------- diagnostics

struct SweepOptions {
  int levels = 3;
  double h0 = 0.1;
  MeshOptions mesh;
};

struct CutRow {
  double epsilon = 0.0;
  std::vector<double> lambdas;  // extrapolated
  double value = 0.0;           // F(P_eps)
  double d1_over_eps = 0.0;
  double d2_over_eps = 0.0;
};

struct CutReport {
  std::vector<double> base_lambdas;
  double base_value = 0.0;
  std::size_t component = 0, vertex = 0;
  std::vector<CutRow> rows;
  double slope1 = 0.0;  // least-squares slope of delta lambda_1 against eps
  double r2 = 0.0;
  /// Largest least-squares slope of delta lambda_h, h >= 2.
  double slope_higher = 0.0;
  /// |delta lambda_2| / |delta lambda_1| at the smallest eps.
  double ratio2_smallest = 0.0;
  /// max(delta lambda_2, 0) / |delta lambda_1| at the smallest eps.
  double ratio2_one_sided = 0.0;
  bool value_decreased = false;  // F(P_eps) < F(P) for every eps
};

/// Corner-cut sweep at the first convex corner. Requires beta > 0 (else
/// InvalidParameter); NotApplicable without convex corners.
CutReport cut_improves(const GeneralizedPolygon& P, const ObjectiveSpec& objective, const std::vector<double>& epsilons,
                       const SweepOptions& options = {});

struct FillReport {
  GeneralizedPolygon filled;
  std::vector<double> lambdas, filled_lambdas;  // extrapolated
  double value = 0.0, filled_value = 0.0;
  double perimeter = 0.0, filled_perimeter = 0.0;
  double area = 0.0, filled_area = 0.0;
  bool kth_negative = false;
  bool comparison_holds = true;  // lambda_h(P fill) >= lambda_h(P) - tol for h <= k
  double tolerance = 1e-3;
};

/// Compares P with fill_holes(P) for beta = objective.beta < 0.
FillReport fill_improves(const GeneralizedPolygon& P, const ObjectiveSpec& objective, int k,
                         const SweepOptions& options = {});

/// -eta 2 sqrt(pi) / sqrt(area(P)). Throws InvalidParameter for zero area
/// or eta <= 0.
double vanishing_guard(const GeneralizedPolygon& P, double eta);
double vanishing_guard(double area, double eta);

/// min{floor((N-1)/2), floor(m A*^2 / (4 pi eta^2)) + k}.
int component_bound(int N, double m, double eta, int k, double a_star);
int component_bound(const GeneralizedPolygon& P, double eta, int k, double a_star);

/// Smallest A > 0 (times 1.01) with F(-A, ..., -A) < F(reference), found by
/// bisection. `reference` is typically the spectrum of the regular N-gon.
double a_star(const ObjectiveSpec& objective, const std::vector<double>& reference);

}  // namespace robin
