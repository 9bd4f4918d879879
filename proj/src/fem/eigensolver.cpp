#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>

#include "robin/error.hpp"
#include "robin/fem.hpp"

namespace robin {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void finish(const SparseMatrix& A, const SparseMatrix& M, SpectrumResult& r) {
  r.residuals.resize(r.eigenvalues.size());
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    auto u = r.eigenvectors.col(static_cast<Eigen::Index>(i));
    const double mn = std::sqrt(u.dot(M * u));
    u /= mn;
    const VectorXd res = A * u - r.eigenvalues[i] * (M * u);
    r.residuals[i] = res.norm();
  }
}

// Sorted small generalized problem (a, b), b positive definite.
void ritz(const MatrixXd& a, const MatrixXd& b, VectorXd& vals, MatrixXd& vecs) {
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(0.5 * (a + a.transpose()), 0.5 * (b + b.transpose()));
  if (es.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "Rayleigh-Ritz step failed");
  vals = es.eigenvalues();
  vecs = es.eigenvectors();
}

SpectrumResult dense_solve(const SparseMatrix& A, const SparseMatrix& M, int k) {
  const MatrixXd a = MatrixXd(A), m = MatrixXd(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(a, m, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "dense generalized eigensolver failed");
  SpectrumResult r;
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  r.eigenvectors = es.eigenvectors().leftCols(k);
  return r;
}

struct ShiftedFactor {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  long negatives = 0;
  bool ok = false;
};

void factor(const SparseMatrix& A, const SparseMatrix& M, double sigma, ShiftedFactor& f) {
  const SparseMatrix S = A - sigma * M;
  f.ldlt.compute(S);
  f.ok = f.ldlt.info() == Eigen::Success;
  if (!f.ok) return;
  const VectorXd d = f.ldlt.vectorD();
  f.negatives = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i]) || d[i] == 0.0) {
      f.ok = false;
      return;
    }
    if (d[i] < 0.0) ++f.negatives;
  }
}

// Number of eigenvalues strictly below sigma (Sylvester inertia).
long count_below(const SparseMatrix& A, const SparseMatrix& M, double sigma) {
  ShiftedFactor f;
  factor(A, M, sigma, f);
  for (int attempt = 0; !f.ok && attempt < 4; ++attempt) {
    sigma += 1e-9 * (1.0 + std::abs(sigma));
    factor(A, M, sigma, f);
  }
  if (!f.ok) throw Error(ErrorKind::SolverFailure, "inertia factorization failed");
  return f.negatives;
}

SpectrumResult sparse_solve(const SparseMatrix& A, const SparseMatrix& M, int k, double area, double scale_guess,
                            const EigenSolverOptions& opt) {
  // Shift below the whole spectrum, certified by inertia.
  double sigma = std::min(0.0, scale_guess) - 1.0 / area;
  ShiftedFactor f;
  for (int attempt = 0;; ++attempt) {
    factor(A, M, sigma, f);
    if (f.ok && f.negatives == 0) break;
    if (attempt > 80) throw Error(ErrorKind::SolverFailure, "could not place a shift below the spectrum");
    sigma = 2.0 * sigma - 1.0 / area;
  }

  const auto n = A.rows();
  const Eigen::Index m = std::min<Eigen::Index>(n, std::max(2 * k, k + 8));
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  MatrixXd X(n, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = nd(rng);

  VectorXd vals;
  MatrixXd vecs;
  SpectrumResult r;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const MatrixXd MX = M * X;
    MatrixXd Y = f.ldlt.solve(MX);
    if (f.ldlt.info() != Eigen::Success || !Y.allFinite()) throw Error(ErrorKind::SolverFailure, "shift-invert solve failed");
    const MatrixXd AY = A * Y, MY = M * Y;
    ritz(Y.transpose() * AY, Y.transpose() * MY, vals, vecs);
    X = Y * vecs;
    const MatrixXd AX = AY * vecs, MXn = MY * vecs;
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
      const double res = (AX.col(i) - vals[i] * MXn.col(i)).norm();
      worst = std::max(worst, res);
    }
    if (worst <= opt.residual_tol * std::max(1.0, std::abs(vals[k - 1]))) {
      r.eigenvalues.assign(vals.data(), vals.data() + k);
      r.eigenvectors = X.leftCols(k);
      break;
    }
  }
  if (r.eigenvalues.empty()) throw Error(ErrorKind::SolverFailure, "shift-invert iteration did not converge");

  // No eigenvalue may be missing below the k-th Ritz value.
  const double top = r.eigenvalues.back();
  const double gap = 1e-8 * std::max(1.0, std::abs(top));
  const long below = std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(), [&](double v) { return v < top - gap; });
  if (count_below(A, M, top - gap) > below) throw Error(ErrorKind::SolverFailure, "inertia check found a missed eigenvalue");
  return r;
}

}  // namespace

SpectrumResult robin_eigs(const AssembledForms& forms, double beta, int k, const EigenSolverOptions& options) {
  const auto n = forms.K.rows();
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidParameter, "k must lie in [1, number of unknowns]");
  if (!std::isfinite(beta)) throw Error(ErrorKind::InvalidParameter, "beta must be finite");
  const SparseMatrix A = forms.K + beta * forms.B;
  SpectrumResult r;
  if (static_cast<std::size_t>(n) <= options.dense_limit) {
    r = dense_solve(A, forms.M, k);
  } else {
    const VectorXd one = VectorXd::Ones(n);
    const double area = one.dot(forms.M * one);
    const double per = one.dot(forms.B * one);
    r = sparse_solve(A, forms.M, k, area, beta * per / area, options);
  }
  r.beta = beta;
  r.mesh_h = forms.mesh_h;
  finish(A, forms.M, r);
  return r;
}

double rayleigh(const AssembledForms& forms, double beta, const Eigen::VectorXd& u) {
  if (u.size() != forms.K.rows()) throw Error(ErrorKind::InvalidParameter, "vector size does not match the forms");
  const double mass = u.dot(forms.M * u);
  if (!(mass > 0.0)) throw Error(ErrorKind::InvalidParameter, "zero vector has no Rayleigh quotient");
  return (u.dot(forms.K * u) + beta * u.dot(forms.B * u)) / mass;
}

}  // namespace robin
