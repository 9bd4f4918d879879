#include <algorithm>
#include <cmath>
#include <fstream>

#include "robin/error.hpp"
#include "robin/harness.hpp"
#include "robin/polygon_io.hpp"

namespace fs = std::filesystem;

namespace robin {

SweepOptions StudyOptions::sweep() const {
  SweepOptions s;
  s.h0 = h;
  s.levels = levels;
  s.mesh = mesh;
  return s;
}

namespace {

SpectrumResult solve(const GeneralizedPolygon& P, double beta, int k, const StudyOptions& o) {
  ConvergenceOptions co;
  co.h0 = o.h;
  co.mesh = o.mesh;
  return converged_eigs(P, beta, k, o.levels, co);
}

std::ofstream open_out(const fs::path& dir, const std::string& name, RunRecord& rec) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw Error(ErrorKind::InvalidParameter, "cannot write " + (dir / name).string());
  os.precision(17);
  rec.outputs.push_back((dir / name).string());
  return os;
}

nlohmann::json study_json(const StudyOptions& o) { return {{"h", o.h}, {"levels", o.levels}}; }

nlohmann::json polygon_input(const fs::path& file, const GeneralizedPolygon& P) {
  return {{"file", file.string()}, {"polygon", polygon_to_json(P)}};
}

std::string lambda_header(int k) {
  std::string s;
  for (int i = 1; i <= k; ++i) s += ",lambda" + std::to_string(i);
  return s;
}

}  // namespace

ConvergeReport converge_family(Family f, int steps, double beta, int k, const StudyOptions& options,
                               double hc_resolution) {
  if (steps < 3) throw Error(ErrorKind::InvalidParameter, "steps must be at least 3");
  ConvergeReport rep;
  rep.family = f;
  const auto limit = family_limit(f);
  rep.limit_lambdas = solve(limit, beta, k, options).extrapolated;
  rep.limit_components = static_cast<int>(limit.components().size());
  rep.limit_sides = side_count(limit);
  rep.hc_strictly_decreasing = true;
  for (int n = 0; n < steps; ++n) {
    const auto P = family_member(f, n);
    ConvergeRow row;
    row.step = n;
    row.parameter = family_parameter(f, n);
    const double res = hc_resolution > 0.0 ? hc_resolution : row.parameter / 8.0;
    row.hc_distance = hc_distance(P, limit, res);
    row.lambdas = solve(P, beta, k, options).extrapolated;
    std::vector<double> gap(static_cast<std::size_t>(k));
    for (int h = 0; h < k; ++h) gap[h] = std::abs(row.lambdas[h] - rep.limit_lambdas[h]);
    rep.gaps.push_back(gap);
    if (!rep.rows.empty() && !(row.hc_distance < rep.rows.back().hc_distance)) rep.hc_strictly_decreasing = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

DetachReport detach_sweep(const GeneralizedPolygon& P, const std::vector<double>& epsilons, double beta, int k,
                          const StudyOptions& options) {
  if (!P.has_cracks()) throw Error(ErrorKind::InvalidParameter, "detachment needs a polygon with at least one crack");
  DetachReport rep;
  rep.base_lambdas = solve(P, beta, k, options).extrapolated;
  rep.base_area = area(P);
  rep.base_perimeter = generalized_perimeter(P);
  for (double eps : epsilons) {
    const auto Q = detach_cracks(P, eps);
    DetachRow row;
    row.epsilon = eps;
    row.hc_distance = hc_distance(Q, P, eps / 8.0);
    row.area = area(Q);
    row.gen_perimeter = generalized_perimeter(Q);
    row.lambdas = solve(Q, beta, k, options).extrapolated;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

RunRecord cmd_eigs(const fs::path& polygon_file, double beta, int k, const StudyOptions& options, const fs::path& out) {
  const auto P = load_polygon(polygon_file);
  auto rec = make_record("eigs", {{"polygon", polygon_input(polygon_file, P)}, {"beta", beta}, {"k", k},
                                  {"study", study_json(options)}});
  const auto s = solve(P, beta, k, options);
  auto j = spectrum_to_json(s, P.name().empty() ? polygon_file.stem().string() : P.name(), k);
  j["area"] = area(P);
  j["gen_perimeter"] = generalized_perimeter(P);
  j["side_count"] = side_count(P);
  j["config_hash"] = rec.config_hash;
  open_out(out, "spectrum.json", rec) << j.dump(2) << '\n';
  auto csv = open_out(out, "convergence.csv", rec);
  csv << csv_banner("robin-convergence/1", rec) << "level,h" << lambda_header(k) << '\n';
  for (std::size_t l = 0; l < s.level_h.size(); ++l) {
    csv << l << ',' << s.level_h[l];
    for (double v : s.level_eigenvalues[l]) csv << ',' << v;
    csv << '\n';
  }
  write_record(out, rec);
  return rec;
}

RunRecord cmd_cut_sweep(const fs::path& polygon_file, double beta, const std::vector<double>& epsilons,
                        const StudyOptions& options, const fs::path& out) {
  const auto P = load_polygon(polygon_file);
  auto rec = make_record("cut-sweep", {{"polygon", polygon_input(polygon_file, P)}, {"beta", beta},
                                       {"epsilons", epsilons}, {"study", study_json(options)}});
  const auto rep = cut_improves(P, ObjectiveSpec::first_eigenvalue(beta), epsilons, options.sweep());
  auto csv = open_out(out, "cut_sweep.csv", rec);
  csv << csv_banner("robin-cut-sweep/1", rec) << "eps,lambda1,lambda2,d1_over_eps,d2_over_eps\n";
  for (const auto& r : rep.rows)
    csv << r.epsilon << ',' << r.lambdas[0] << ',' << r.lambdas[1] << ',' << r.d1_over_eps << ',' << r.d2_over_eps << '\n';
  nlohmann::json j{{"config_hash", rec.config_hash},
                   {"corner", {rep.component, rep.vertex}},
                   {"base_lambdas", rep.base_lambdas},
                   {"slope_lambda1", rep.slope1},
                   {"r2_lambda1", rep.r2},
                   {"slope_higher_max", rep.slope_higher},
                   {"ratio_lambda2_smallest_eps", rep.ratio2_smallest},
                   {"ratio_lambda2_one_sided", rep.ratio2_one_sided},
                   {"value_decreased", rep.value_decreased}};
  open_out(out, "cut_fit.json", rec) << j.dump(2) << '\n';
  write_record(out, rec);
  return rec;
}

RunRecord cmd_converge(Family family, int steps, double beta, int k, const StudyOptions& options, const fs::path& out) {
  auto rec = make_record("converge", {{"family", to_string(family)}, {"steps", steps}, {"beta", beta}, {"k", k},
                                      {"study", study_json(options)}});
  const auto rep = converge_family(family, steps, beta, k, options);
  auto csv = open_out(out, "converge.csv", rec);
  csv << csv_banner("robin-converge/1", rec) << "step,parameter,hc_distance" << lambda_header(k) << '\n';
  for (const auto& r : rep.rows) {
    csv << r.step << ',' << r.parameter << ',' << r.hc_distance;
    for (double v : r.lambdas) csv << ',' << v;
    csv << '\n';
  }
  nlohmann::json j{{"config_hash", rec.config_hash},
                   {"family", to_string(family)},
                   {"limit_lambdas", rep.limit_lambdas},
                   {"limit_components", rep.limit_components},
                   {"limit_sides", rep.limit_sides},
                   {"hc_strictly_decreasing", rep.hc_strictly_decreasing},
                   {"final_gaps", rep.gaps.back()}};
  open_out(out, "converge.json", rec) << j.dump(2) << '\n';
  write_record(out, rec);
  return rec;
}

RunRecord cmd_optimize(const fs::path& config_file, const fs::path& out) {
  std::ifstream is(config_file);
  if (!is) throw Error(ErrorKind::InvalidParameter, "cannot open " + config_file.string());
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, config_file.string() + ": " + e.what());
  }
  const auto problem = problem_from_json(cfg);
  auto rec = make_record("optimize", problem_to_json(problem));
  OptimizationResult res;
  try {
    res = optimize(problem);
  } catch (const Error& e) {
    throw Error(e.kind(), "optimize run " + rec.config_hash + ": " + e.what());
  }
  auto j = result_to_json(res, problem);
  j["config_hash"] = rec.config_hash;
  open_out(out, "result.json", rec) << j.dump(2) << '\n';
  auto csv = open_out(out, "history.csv", rec);
  csv << csv_banner("robin-history/1", rec);
  write_history_csv(csv, res);
  csv.close();
  rec.outputs.push_back((out / "polygon.json").string());
  save_polygon(out / "polygon.json", res.best_polygon);
  write_record(out, rec);
  return rec;
}

RunRecord cmd_detach_sweep(const fs::path& polygon_file, const std::vector<double>& epsilons, double beta, int k,
                           const StudyOptions& options, const fs::path& out) {
  const auto P = load_polygon(polygon_file);
  auto rec = make_record("detach-sweep", {{"polygon", polygon_input(polygon_file, P)}, {"epsilons", epsilons},
                                          {"beta", beta}, {"k", k}, {"study", study_json(options)}});
  const auto rep = detach_sweep(P, epsilons, beta, k, options);
  auto csv = open_out(out, "detach.csv", rec);
  csv << csv_banner("robin-detach/1", rec) << "eps,hc_distance,area,gen_perimeter" << lambda_header(k) << '\n';
  csv << 0 << ',' << 0 << ',' << rep.base_area << ',' << rep.base_perimeter;
  for (double v : rep.base_lambdas) csv << ',' << v;
  csv << '\n';
  for (const auto& r : rep.rows) {
    csv << r.epsilon << ',' << r.hc_distance << ',' << r.area << ',' << r.gen_perimeter;
    for (double v : r.lambdas) csv << ',' << v;
    csv << '\n';
  }
  write_record(out, rec);
  return rec;
}

RunRecord cmd_fill_compare(const fs::path& polygon_file, double beta, int k, const StudyOptions& options,
                           const fs::path& out) {
  const auto P = load_polygon(polygon_file);
  auto rec = make_record("fill-compare", {{"polygon", polygon_input(polygon_file, P)}, {"beta", beta}, {"k", k},
                                          {"study", study_json(options)}});
  const auto rep = fill_improves(P, ObjectiveSpec::sum_first_k(k, beta), k, options.sweep());
  nlohmann::json j{{"config_hash", rec.config_hash},
                   {"lambdas", rep.lambdas},
                   {"filled_lambdas", rep.filled_lambdas},
                   {"value", rep.value},
                   {"filled_value", rep.filled_value},
                   {"area", rep.area},
                   {"filled_area", rep.filled_area},
                   {"gen_perimeter", rep.perimeter},
                   {"filled_gen_perimeter", rep.filled_perimeter},
                   {"kth_negative", rep.kth_negative},
                   {"comparison_holds", rep.comparison_holds},
                   {"tolerance", rep.tolerance}};
  open_out(out, "fill.json", rec) << j.dump(2) << '\n';
  rec.outputs.push_back((out / "filled_polygon.json").string());
  save_polygon(out / "filled_polygon.json", rep.filled);
  write_record(out, rec);
  return rec;
}

}  // namespace robin
