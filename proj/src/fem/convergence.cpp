#include <cmath>
#include <limits>
#include <sstream>

#include "robin/error.hpp"
#include "robin/fem.hpp"

namespace robin {

SpectrumResult converged_eigs(const TriMesh& base, double beta, int k, int levels, const EigenSolverOptions& solver) {
  if (levels < 2) throw Error(ErrorKind::InvalidParameter, "levels must be at least 2");
  TriMesh mesh = base;
  SpectrumResult fine;
  std::vector<std::vector<double>> vals;
  std::vector<double> hs;
  for (int l = 0; l < levels; ++l) {
    if (l > 0) mesh = refine(mesh);
    fine = robin_eigs(assemble(mesh), beta, k, solver);
    vals.push_back(fine.eigenvalues);
    hs.push_back(mesh.h_target);
  }
  fine.level_eigenvalues = vals;
  fine.level_h = hs;
  fine.extrapolated.resize(k);
  fine.error_estimate.resize(k);
  fine.observed_rate.assign(k, std::numeric_limits<double>::quiet_NaN());
  fine.converged = true;
  std::ostringstream note;
  for (int i = 0; i < k; ++i) {
    const double lf = vals[levels - 1][i], lc = vals[levels - 2][i];
    fine.extrapolated[i] = lf + (lf - lc) / 3.0;
    fine.error_estimate[i] = std::abs(lf - lc) / 3.0;
    if (levels >= 3) {
      const double d1 = std::abs(vals[levels - 2][i] - vals[levels - 3][i]);
      const double d2 = std::abs(lf - lc);
      const double floor = 1e-11 * (1.0 + std::abs(lf));
      if (d2 > floor) fine.observed_rate[i] = std::log2(d1 / d2);
      if (d2 > floor && d2 > 0.5 * d1) {
        fine.converged = false;
        note << "eigenvalue " << i + 1 << ": differences " << d1 << " -> " << d2 << " shrink by less than 2; ";
      }
    }
  }
  fine.convergence_note = note.str();
  return fine;
}

SpectrumResult converged_eigs(const GeneralizedPolygon& P, double beta, int k, int levels,
                              const ConvergenceOptions& options) {
  const double h0 = options.h0 > 0.0 ? options.h0 : 0.1 * std::sqrt(area(P));
  return converged_eigs(triangulate(P, h0, options.mesh), beta, k, levels, options.solver);
}

}  // namespace robin
