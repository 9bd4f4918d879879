#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "robin/error.hpp"
#include "robin/optimizer.hpp"
#include "robin/polygon_io.hpp"

namespace robin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool better(Direction d, double a, double b) { return d == Direction::Minimize ? a < b : a > b; }

double saturation_factor(const ConstraintSpec& c, double measure) {
  const double ratio = c.bound / measure;
  return c.kind == ConstraintSpec::Kind::Area ? std::sqrt(ratio) : ratio;
}

GeneralizedPolygon project(const ConstraintSpec& c, const GeneralizedPolygon& P) {
  const double t = saturation_factor(c, c.measure(P));
  return t == 1.0 ? P : scale(P, t);
}

std::optional<GeneralizedPolygon> decode(const OptimizationProblem& pb, const std::vector<double>& x) {
  try {
    if (pb.space == SearchSpace::AxisRectangle) {
      if (!(x[0] > 0.0) || !(x[1] > 0.0)) return std::nullopt;
      return rectangle(x[0], x[1], pb.side_budget);
    }
    std::vector<Point2> v(x.size() / 2);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = {x[2 * i], x[2 * i + 1]};
    if (simple_polygon_violation(v)) return std::nullopt;
    return GeneralizedPolygon::from_simple(SimplePolygon(std::move(v)), pb.side_budget);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<double> encode(const SimplePolygon& p) {
  std::vector<double> x;
  for (const auto& v : p.vertices()) {
    x.push_back(v.x);
    x.push_back(v.y);
  }
  return x;
}

std::optional<double> solve_value(const OptimizationProblem& pb, const GeneralizedPolygon& P) {
  try {
    MeshOptions mo;
    mo.max_nodes = static_cast<std::size_t>(std::max(20000.0, 40.0 * area(P) / (pb.mesh_h * pb.mesh_h)));
    const auto mesh = triangulate(P, pb.mesh_h, mo);
    const auto spec = robin_eigs(assemble(mesh), pb.objective.beta, pb.objective.arity());
    const double v = evaluate(pb.objective, std::span<const double>(spec.eigenvalues));
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct Candidate {
  bool valid = false;
  bool feasible = false;
  double value = 0.0;  // F
  double penalty = 0.0;
  GeneralizedPolygon polygon;  // after dilation for beta > 0
};

struct RestartOutcome {
  std::vector<HistoryEntry> history;  // value is restart-local best so far
  bool found = false;
  double best = 0.0;
  GeneralizedPolygon best_polygon;
  int rejected = 0;
  std::exception_ptr error;
};

class Evaluator {
 public:
  explicit Evaluator(const OptimizationProblem& pb) : pb_(pb), dir_(pb.objective.direction()) {}

  Candidate candidate(const std::vector<double>& x, double penalty_weight, double prune_below) const {
    Candidate c;
    auto P = decode(pb_, x);
    if (!P) return c;
    if (pb_.constraint.convex && !P->components()[0].walk.is_convex()) return c;
    const double measure = pb_.constraint.measure(*P);
    if (!(measure > 0.0)) return c;
    if (pb_.objective.beta > 0.0) {
      P = project(pb_.constraint, *P);
      c.feasible = true;
    } else {
      const double viol = std::max(0.0, measure - pb_.constraint.bound);
      c.penalty = penalty_weight * viol * viol;
      c.feasible = measure <= pb_.constraint.bound + 1e-8 * std::max(1.0, pb_.constraint.bound);
      // lambda_1 <= -eta 2 sqrt(pi)/sqrt(area): candidates whose envelope is
      // already below the best value cannot win.
      if (pb_.objective.kind == ObjectiveSpec::Kind::FirstEigenvalue && std::isfinite(prune_below)) {
        const double guard = vanishing_guard(area(*P), -pb_.objective.beta);
        if (guard < prune_below) {
          c.valid = true;
          c.value = guard;
          c.polygon = *P;
          c.feasible = false;  // surrogate value, never recorded as a best
          return c;
        }
      }
    }
    const auto v = solve_value(pb_, *P);
    if (!v) return c;
    c.valid = true;
    c.value = *v;
    c.polygon = std::move(*P);
    return c;
  }

  // Scalar minimized by Nelder-Mead.
  double merit(const Candidate& c) const {
    if (!c.valid) return kInf;
    return (dir_ == Direction::Minimize ? c.value : -c.value) + c.penalty;
  }

 private:
  const OptimizationProblem& pb_;
  Direction dir_;
};

std::vector<double> start_point(const OptimizationProblem& pb, std::mt19937_64& rng, double& diameter) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  if (pb.space == SearchSpace::AxisRectangle) {
    const auto sq = regular_ngon(4, pb.constraint);
    const double side = distance(sq[0], sq[1]);
    diameter = side * std::numbers::sqrt2;
    const double amp = 0.1 * diameter;
    for (;;) {
      std::vector<double> x{side + amp * u(rng), side + amp * u(rng)};
      if (x[0] > 0.0 && x[1] > 0.0) return x;
    }
  }
  const auto reg = regular_ngon(pb.side_budget, pb.constraint);
  diameter = reg.bbox().diameter();
  const double amp = 0.1 * diameter;
  const auto base = encode(reg);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto x = base;
    for (double& c : x) c += amp * u(rng);
    if (decode(pb, x)) return x;
  }
  return base;
}

RestartOutcome run_restart(const OptimizationProblem& pb, int r) {
  RestartOutcome out;
  const Evaluator ev(pb);
  const Direction dir = pb.objective.direction();
  std::mt19937_64 rng(pb.seed + static_cast<std::uint64_t>(r));
  double diameter = 1.0;
  const auto x0 = start_point(pb, rng, diameter);

  double weight = 0.0;
  if (pb.objective.beta < 0.0) {
    const Candidate c0 = ev.candidate(x0, 0.0, kInf);
    const double f0 = c0.valid ? std::abs(c0.value) : 1.0;
    weight = 10.0 * std::max(f0, 1e-6) / pb.constraint.bound;
  }

  const auto f = [&](const std::vector<double>& x) {
    const double prune = out.found ? out.best : (dir == Direction::Maximize ? -kInf : kInf);
    const Candidate c = ev.candidate(x, weight, dir == Direction::Maximize ? prune : -kInf);
    if (!c.valid) {
      ++out.rejected;
      return kInf;
    }
    if (c.feasible && (!out.found || better(dir, c.value, out.best))) {
      out.found = true;
      out.best = c.value;
      out.best_polygon = c.polygon;
    }
    return ev.merit(c);
  };

  NelderMeadOptions opt;
  opt.max_iters = pb.max_iters;
  opt.initial_step = 0.1 * diameter;
  NelderMeadTrace trace;
  NelderMeadHooks hooks;
  hooks.on_iteration = [&](int it) {
    HistoryEntry h;
    h.iter = it;
    h.restart = r;
    h.feasible = out.found;
    h.value = out.found ? out.best : std::numeric_limits<double>::quiet_NaN();
    if (out.found) {
      h.area = area(out.best_polygon);
      h.gen_perimeter = generalized_perimeter(out.best_polygon);
    }
    out.history.push_back(h);
  };
  hooks.on_rebuild = [&](int) {
    if (pb.objective.beta < 0.0 && !trace.best_point.empty()) {
      const auto P = decode(pb, trace.best_point.back());
      const bool feasible = P && pb.constraint.measure(*P) <= pb.constraint.bound + 1e-8 * std::max(1.0, pb.constraint.bound);
      if (!feasible) weight *= 2.0;
    }
  };
  const auto last_x = nelder_mead(f, x0, opt, &trace, hooks);

  // Final projection of the penalized optimum onto the constraint.
  if (pb.objective.beta < 0.0) {
    if (auto P = decode(pb, last_x)) {
      const double m = pb.constraint.measure(*P);
      if (m > pb.constraint.bound) *P = project(pb.constraint, *P);
      if (!pb.constraint.convex || P->components()[0].walk.is_convex()) {
        if (auto v = solve_value(pb, *P); v && (!out.found || better(dir, *v, out.best))) {
          out.found = true;
          out.best = *v;
          out.best_polygon = *P;
        }
      }
    }
  }
  return out;
}

}  // namespace

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ROBIN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::optional<double> evaluate_candidate(const OptimizationProblem& problem, const GeneralizedPolygon& P) {
  GeneralizedPolygon Q = problem.objective.beta > 0.0 ? project(problem.constraint, P) : P;
  return solve_value(problem, Q);
}

OptimizationResult optimize(const OptimizationProblem& pb) {
  if (pb.side_budget < 3) throw Error(ErrorKind::InvalidParameter, "side budget must be at least 3");
  if (pb.restarts < 1) throw Error(ErrorKind::InvalidParameter, "restarts must be at least 1");
  if (!(pb.mesh_h > 0.0)) throw Error(ErrorKind::InvalidParameter, "mesh_h must be positive");
  if (pb.max_iters < 1) throw Error(ErrorKind::InvalidParameter, "max_iters must be at least 1");
  if (pb.space == SearchSpace::AxisRectangle && pb.side_budget < 4)
    throw Error(ErrorKind::InvalidParameter, "rectangles need a side budget of at least 4");
  require_hypotheses(pb.objective);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(pb.restarts));
  std::atomic<int> next{0};
  const int workers = std::min(thread_count(pb.threads), pb.restarts);
  const auto work = [&]() {
    for (int r; (r = next.fetch_add(1)) < pb.restarts;) {
      try {
        outcomes[r] = run_restart(pb, r);
      } catch (...) {
        outcomes[r].error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& o : outcomes)
    if (o.error) std::rethrow_exception(o.error);

  const Direction dir = pb.objective.direction();
  OptimizationResult res;
  res.strategy =
      "heuristic multi-start Nelder-Mead over vertex coordinates with remeshing per candidate; "
      "no optimality certificate";
  bool any = false;
  int iter = 0;
  double running = 0.0;
  GeneralizedPolygon running_poly;
  for (int r = 0; r < pb.restarts; ++r) {
    const auto& o = outcomes[r];
    res.rejected_candidates += o.rejected;
    res.restart_best.push_back(o.found ? o.best : std::numeric_limits<double>::quiet_NaN());
    for (const auto& h : o.history) {
      HistoryEntry g = h;
      g.iter = iter++;
      if (h.feasible && (!any || better(dir, h.value, running))) {
        any = true;
        running = h.value;
        g.area = h.area;
        g.gen_perimeter = h.gen_perimeter;
      } else if (any) {
        g.area = res.history.back().area;
        g.gen_perimeter = res.history.back().gen_perimeter;
      }
      g.feasible = any;
      g.value = any ? running : std::numeric_limits<double>::quiet_NaN();
      res.history.push_back(g);
    }
    if (o.found && (res.best_polygon.components().empty() || better(dir, o.best, res.best_value))) {
      res.best_value = o.best;
      res.best_polygon = o.best_polygon;
      res.best_restart = r;
    }
  }
  if (res.best_polygon.components().empty()) {
    throw Error(ErrorKind::OptimizationFailure,
                "no restart produced a feasible candidate (" + std::to_string(res.rejected_candidates) +
                    " candidates rejected for invalid geometry, convexity or meshing)");
  }
  // The merged trace ends at the overall best value.
  if (!res.history.empty()) {
    auto& last = res.history.back();
    last.value = res.best_value;
    last.feasible = true;
    last.area = area(res.best_polygon);
    last.gen_perimeter = generalized_perimeter(res.best_polygon);
  }

  const double measure = pb.constraint.measure(res.best_polygon);
  res.constraint_residual = measure - pb.constraint.bound;
  res.saturated = std::abs(res.constraint_residual) <= 1e-8 * std::max(1.0, pb.constraint.bound);
  if (pb.certify_levels >= 2) {
    ConvergenceOptions co;
    co.h0 = pb.mesh_h;
    res.spectrum = converged_eigs(res.best_polygon, pb.objective.beta, pb.objective.arity(), pb.certify_levels, co);
    res.certified_value = evaluate(pb.objective, res.spectrum);
  }
  return res;
}

void write_history_csv(std::ostream& os, const OptimizationResult& result) {
  os.precision(17);
  os << "iter,value,feasible,area,gen_perimeter\n";
  for (const auto& h : result.history)
    os << h.iter << ',' << h.value << ',' << (h.feasible ? 1 : 0) << ',' << h.area << ',' << h.gen_perimeter << '\n';
}

namespace {

nlohmann::json constraint_to_json(const ConstraintSpec& c) {
  return {{"kind", c.kind == ConstraintSpec::Kind::Area ? "area" : "perimeter"}, {"bound", c.bound}, {"convex", c.convex}};
}

}  // namespace

nlohmann::json problem_to_json(const OptimizationProblem& p) {
  nlohmann::json j;
  j["N"] = p.side_budget;
  j["beta"] = p.objective.beta;
  j["constraint"] = constraint_to_json(p.constraint);
  j["objective"] = objective_to_json(p.objective);
  j["restarts"] = p.restarts;
  j["seed"] = p.seed;
  j["mesh_h"] = p.mesh_h;
  j["max_iters"] = p.max_iters;
  j["search"] = p.space == SearchSpace::AxisRectangle ? "rectangle" : "polygon";
  j["certify_levels"] = p.certify_levels;
  return {{"problem", j}};
}

OptimizationProblem problem_from_json(const nlohmann::json& root) {
  try {
    const auto& j = root.contains("problem") ? root.at("problem") : root;
    OptimizationProblem p;
    p.side_budget = j.at("N").get<int>();
    const double beta = j.at("beta").get<double>();
    auto obj = j.value("objective", nlohmann::json{{"objective", "first_eigenvalue"}});
    if (!obj.contains("beta")) obj["beta"] = beta;
    p.objective = objective_from_json(obj);
    if (p.objective.beta != beta) throw Error(ErrorKind::InvalidParameter, "objective beta disagrees with problem beta");
    const auto& c = j.at("constraint");
    const std::string kind = c.at("kind").get<std::string>();
    const double bound = c.at("bound").get<double>();
    const bool convex = c.value("convex", false);
    if (kind == "area") p.constraint = ConstraintSpec::area(bound, convex);
    else if (kind == "perimeter" || kind == "gen_perimeter") p.constraint = ConstraintSpec::perimeter(bound, convex);
    else throw Error(ErrorKind::InvalidParameter, "unknown constraint kind '" + kind + "'");
    p.restarts = j.value("restarts", p.restarts);
    p.seed = j.value("seed", p.seed);
    p.mesh_h = j.value("mesh_h", p.mesh_h);
    p.max_iters = j.value("max_iters", p.max_iters);
    p.certify_levels = j.value("certify_levels", p.certify_levels);
    p.threads = j.value("threads", p.threads);
    const std::string search = j.value("search", std::string("polygon"));
    if (search == "rectangle") p.space = SearchSpace::AxisRectangle;
    else if (search == "polygon") p.space = SearchSpace::FreePolygon;
    else throw Error(ErrorKind::InvalidParameter, "unknown search space '" + search + "'");
    if (p.side_budget < 3) throw Error(ErrorKind::InvalidParameter, "N must be at least 3");
    if (p.restarts < 1) throw Error(ErrorKind::InvalidParameter, "restarts must be at least 1");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("problem config: ") + e.what());
  }
}

nlohmann::json result_to_json(const OptimizationResult& r, const OptimizationProblem& p) {
  nlohmann::json j;
  j["strategy"] = r.strategy;
  j["problem"] = problem_to_json(p)["problem"];
  j["best_value"] = r.best_value;
  j["certified_value"] = r.certified_value;
  j["constraint_residual"] = r.constraint_residual;
  j["saturated"] = r.saturated;
  j["best_restart"] = r.best_restart;
  j["restart_best"] = r.restart_best;
  j["rejected_candidates"] = r.rejected_candidates;
  j["best_polygon"] = polygon_to_json(r.best_polygon);
  j["area"] = area(r.best_polygon);
  j["gen_perimeter"] = generalized_perimeter(r.best_polygon);
  j["spectrum"] = {{"beta", r.spectrum.beta},
                   {"eigenvalues", r.spectrum.eigenvalues},
                   {"extrapolated", r.spectrum.extrapolated},
                   {"residuals", r.spectrum.residuals},
                   {"error_estimate", r.spectrum.error_estimate},
                   {"converged", r.spectrum.converged}};
  return j;
}

}  // namespace robin
