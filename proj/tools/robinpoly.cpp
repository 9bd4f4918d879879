#include <CLI11.hpp>
#include <iostream>

#include "robin/error.hpp"
#include "robin/harness.hpp"

namespace {

int exit_code(robin::ErrorKind kind) {
  switch (kind) {
    case robin::ErrorKind::MeshingFailure:
    case robin::ErrorKind::SolverFailure:
    case robin::ErrorKind::OptimizationFailure: return 3;
    default: return 2;
  }
}

void add_study(CLI::App* cmd, robin::StudyOptions& o) {
  cmd->add_option("--mesh-h", o.h, "Coarsest mesh size")->check(CLI::PositiveNumber);
  cmd->add_option("--levels", o.levels, "Nested refinement levels")->check(CLI::Range(2, 8));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robin-Laplacian eigenvalues on generalized polygons"};
  app.set_version_flag("--version", robin::kToolVersion);
  app.require_subcommand(1);

  std::string polygon, config, family = "pacman", out = "out";
  double beta = 1.0;
  int k = 1, steps = 5;
  std::vector<double> eps;
  robin::StudyOptions study;

  auto* eigs = app.add_subcommand("eigs", "Converged Robin eigenvalues of a polygon");
  eigs->add_option("--polygon", polygon, "Polygon JSON file")->required()->check(CLI::ExistingFile);
  eigs->add_option("--beta", beta, "Robin parameter");
  eigs->add_option("--k", k, "Number of eigenvalues")->check(CLI::Range(1, 10));
  add_study(eigs, study);
  eigs->add_option("--out", out, "Output directory");

  auto* cut = app.add_subcommand("cut-sweep", "Corner-cut sweep at the first convex corner");
  cut->add_option("--polygon", polygon, "Polygon JSON file")->required()->check(CLI::ExistingFile);
  cut->add_option("--beta", beta, "Robin parameter (positive)");
  cut->add_option("--eps", eps, "Cut depths")->required()->expected(2, 64);
  add_study(cut, study);
  cut->add_option("--out", out, "Output directory");

  auto* conv = app.add_subcommand("converge", "Degenerating family study");
  conv->add_option("--family", family, "pacman | mountains | shrinking_slit")
      ->check(CLI::IsMember({"pacman", "mountains", "shrinking_slit"}));
  conv->add_option("--steps", steps, "Family members")->check(CLI::Range(3, 12));
  conv->add_option("--beta", beta, "Robin parameter");
  conv->add_option("--k", k, "Number of eigenvalues")->check(CLI::Range(1, 10));
  add_study(conv, study);
  conv->add_option("--out", out, "Output directory");

  auto* opt = app.add_subcommand("optimize", "Shape optimization from a run config");
  opt->add_option("--config", config, "Run-config JSON file")->required()->check(CLI::ExistingFile);
  opt->add_option("--out", out, "Output directory");

  auto* det = app.add_subcommand("detach-sweep", "Crack detachment sweep");
  det->add_option("--polygon", polygon, "Polygon JSON file")->required()->check(CLI::ExistingFile);
  det->add_option("--eps", eps, "Detachment distances")->required()->expected(1, 64);
  det->add_option("--beta", beta, "Robin parameter");
  det->add_option("--k", k, "Number of eigenvalues")->check(CLI::Range(1, 10));
  add_study(det, study);
  det->add_option("--out", out, "Output directory");

  auto* fill = app.add_subcommand("fill-compare", "Compare a polygon with its filled hull");
  fill->add_option("--polygon", polygon, "Polygon JSON file")->required()->check(CLI::ExistingFile);
  fill->add_option("--beta", beta, "Robin parameter (negative)");
  fill->add_option("--k", k, "Number of eigenvalues")->check(CLI::Range(1, 10));
  add_study(fill, study);
  fill->add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    robin::RunRecord rec;
    if (*eigs) rec = robin::cmd_eigs(polygon, beta, k, study, out);
    else if (*cut) rec = robin::cmd_cut_sweep(polygon, beta, eps, study, out);
    else if (*conv) rec = robin::cmd_converge(robin::family_from_string(family), steps, beta, k, study, out);
    else if (*opt) rec = robin::cmd_optimize(config, out);
    else if (*det) rec = robin::cmd_detach_sweep(polygon, eps, beta, k, study, out);
    else if (*fill) rec = robin::cmd_fill_compare(polygon, beta, k, study, out);
    std::cout << rec.command << " " << rec.config_hash << "\n";
    for (const auto& o : rec.outputs) std::cout << "  " << o << "\n";
    return 0;
  } catch (const robin::Error& e) {
    std::cerr << "robinpoly: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "robinpoly: " << e.what() << "\n";
    return 2;
  }
}
