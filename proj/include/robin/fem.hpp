#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "robin/geometry.hpp"
#include "robin/mesh.hpp"

namespace robin {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// P1 forms on a mesh: a(u, u) = u'Ku + beta u'Bu and (u, u) = u'Mu.
struct AssembledForms {
  SparseMatrix K;  // stiffness
  SparseMatrix M;  // area mass
  SparseMatrix B;  // boundary mass, both sides of every crack
  double mesh_h = 0.0;
};

AssembledForms assemble(const TriMesh& mesh);

struct SpectrumResult {
  double beta = 0.0;
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;     // M-orthonormal columns
  std::vector<double> residuals;    // ||(K + beta B - lambda M) u||_2 with ||u||_M = 1
  double mesh_h = 0.0;

  // Filled by converged_eigs.
  std::vector<double> extrapolated;
  std::vector<double> error_estimate;
  std::vector<double> observed_rate;  // log2 of successive difference ratios; NaN with two levels
  std::vector<double> level_h;
  std::vector<std::vector<double>> level_eigenvalues;
  bool converged = true;
  std::string convergence_note;
};

struct EigenSolverOptions {
  /// Problems up to this many unknowns use the dense generalized solver.
  std::size_t dense_limit = 1000;
  double residual_tol = 1e-10;
  int max_iterations = 1000;
};

/// k smallest eigenpairs of the pencil (K + beta B, M).
/// Throws InvalidParameter for k out of range, SolverFailure on breakdown.
SpectrumResult robin_eigs(const AssembledForms& forms, double beta, int k, const EigenSolverOptions& options = {});

/// (u'Ku + beta u'Bu) / u'Mu. Throws InvalidParameter for a zero vector.
double rayleigh(const AssembledForms& forms, double beta, const Eigen::VectorXd& u);

struct ConvergenceOptions {
  /// Coarsest mesh size; 0 picks 0.1 sqrt(area).
  double h0 = 0.0;
  MeshOptions mesh;
  EigenSolverOptions solver;
};

/// Solves on `levels` nested uniform refinements of one base mesh and
/// Richardson-extrapolates assuming O(h^2). The result carries the finest
/// eigenpairs; `converged` is false when successive differences fail to
/// shrink by a factor of at least two.
SpectrumResult converged_eigs(const GeneralizedPolygon& P, double beta, int k, int levels,
                              const ConvergenceOptions& options = {});

/// Same as above starting from a given base mesh.
SpectrumResult converged_eigs(const TriMesh& base, double beta, int k, int levels,
                              const EigenSolverOptions& solver = {});

}  // namespace robin
