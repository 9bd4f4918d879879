#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "robin/error.hpp"
#include "robin/fem.hpp"
#include "robin/polygon_io.hpp"

using namespace robin;

namespace {

TriMesh reference_triangle() {
  TriMesh m;
  m.nodes = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.boundary_edges = {{{0, 1}}, {{1, 2}}, {{2, 0}}};
  m.h_target = 1.0;
  return m;
}

Eigen::MatrixXd dense(const SparseMatrix& A) { return Eigen::MatrixXd(A); }

}  // namespace

TEST_SUITE("fem") {

TEST_CASE("element matrices of the reference triangle") {
  const auto f = assemble(reference_triangle());
  Eigen::Matrix3d K;
  K << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
  Eigen::Matrix3d M;
  M << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  M /= 24.0;
  // Edge mass L/6 [[2,1],[1,2]] summed over edges of lengths 1, sqrt 2, 1.
  const double r = std::sqrt(2.0);
  Eigen::Matrix3d B;
  B << 4.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, (2 + 2 * r) / 6, r / 6, 1.0 / 6, r / 6, (2 + 2 * r) / 6;
  CHECK((dense(f.K) - K).norm() < 1e-14);
  CHECK((dense(f.M) - M).norm() < 1e-14);
  CHECK((dense(f.B) - B).norm() < 1e-14);
}

TEST_CASE("global forms reproduce area and generalized perimeter") {
  const auto P = load_polygon(ROBIN_DATA_DIR "/slit_square.json");
  const auto f = assemble(triangulate(P, 0.1));
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(f.M.rows());
  CHECK(one.dot(f.M * one) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.dot(f.B * one) == doctest::Approx(4.6).epsilon(1e-12));
  CHECK((f.K * one).norm() < 1e-12);
  CHECK((dense(f.K) - dense(f.K).transpose()).norm() < 1e-13);
}

TEST_CASE("square eigenvalue converges to the separable value") {
  for (double beta : {0.5, 1.0, 5.0}) {
    const auto s = converged_eigs(unit_square(), beta, 1, 3);
    CHECK(std::abs(s.extrapolated[0] / oracle::robin_square_lambda1(beta) - 1.0) < 1e-4);
  }
}

TEST_CASE("zero parameter gives a constant first eigenvector") {
  const auto f = assemble(triangulate(unit_square(), 0.1));
  const auto s = robin_eigs(f, 0.0, 2);
  CHECK(std::abs(s.eigenvalues[0]) < 1e-10);
  const Eigen::VectorXd u = s.eigenvectors.col(0);
  CHECK((u.array() - u.mean()).abs().maxCoeff() < 1e-8 * std::abs(u.mean()));
  CHECK(s.eigenvalues[1] == doctest::Approx(std::pow(std::acos(-1.0), 2)).epsilon(2e-2));
}

TEST_CASE("eigenvectors are M-orthonormal with small residuals") {
  const auto f = assemble(triangulate(load_polygon(ROBIN_DATA_DIR "/slit_square.json"), 0.1));
  const auto s = robin_eigs(f, 1.0, 4);
  const Eigen::MatrixXd G = s.eigenvectors.transpose() * (f.M * s.eigenvectors);
  CHECK((G - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-10);
  for (double r : s.residuals) CHECK(r < 1e-8);
  for (int i = 0; i < 3; ++i) CHECK(s.eigenvalues[i] <= s.eigenvalues[i + 1]);
}

TEST_CASE("sparse and dense solvers agree") {
  const auto f = assemble(triangulate(load_polygon(ROBIN_DATA_DIR "/slit_square.json"), 0.04));
  REQUIRE(f.K.rows() > 1000);
  EigenSolverOptions dense_opts;
  dense_opts.dense_limit = 100000;
  const auto a = robin_eigs(f, -1.0, 5, dense_opts);
  const auto b = robin_eigs(f, -1.0, 5);
  for (int i = 0; i < 5; ++i) CHECK(b.eigenvalues[i] == doctest::Approx(a.eigenvalues[i]).epsilon(1e-9));
}

TEST_CASE("Rayleigh quotients bound the first eigenvalue") {
  const auto f = assemble(triangulate(unit_square(), 0.15));
  const double beta = 2.0;
  const auto s = robin_eigs(f, beta, 1);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd u(f.K.rows());
    for (int i = 0; i < u.size(); ++i) u[i] = n(rng);
    CHECK(rayleigh(f, beta, u) >= s.eigenvalues[0] - 1e-12);
  }
  CHECK(rayleigh(f, beta, s.eigenvectors.col(0)) == doctest::Approx(s.eigenvalues[0]).epsilon(1e-10));
  CHECK_THROWS_AS(rayleigh(f, beta, Eigen::VectorXd::Zero(f.K.rows())), Error);
}

TEST_CASE("eigenvalues increase with the parameter") {
  const auto f = assemble(triangulate(unit_square(), 0.15));
  std::vector<double> prev;
  for (double beta = -3.0; beta <= 3.0; beta += 1.0) {
    const auto s = robin_eigs(f, beta, 3);
    if (!prev.empty())
      for (int i = 0; i < 3; ++i) CHECK(s.eigenvalues[i] >= prev[i] - 1e-12);
    prev = s.eigenvalues;
  }
}

TEST_CASE("scaling identity on matched meshes") {
  const auto m = triangulate(load_polygon(ROBIN_DATA_DIR "/slit_square.json"), 0.15);
  const auto f = assemble(m);
  const auto g = assemble(scale_mesh(m, 2.0));
  const auto a = robin_eigs(g, 1.0, 3);
  const auto b = robin_eigs(f, 2.0, 3);
  for (int i = 0; i < 3; ++i) CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i] / 4.0).epsilon(1e-10));
}

TEST_CASE("convergence bookkeeping") {
  const auto s = converged_eigs(unit_square(), 1.0, 2, 3);
  CHECK(s.level_h.size() == 3);
  CHECK(s.level_eigenvalues.size() == 3);
  CHECK(s.level_h[1] == doctest::Approx(0.5 * s.level_h[0]));
  CHECK(s.converged);
  for (double r : s.observed_rate) CHECK(r == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("bad requests are rejected") {
  const auto f = assemble(triangulate(unit_square(), 0.5));
  CHECK_THROWS_AS(robin_eigs(f, 1.0, 0), Error);
  CHECK_THROWS_AS(robin_eigs(f, 1.0, static_cast<int>(f.K.rows()) + 1), Error);
  CHECK_THROWS_AS(converged_eigs(unit_square(), 1.0, 1, 1), Error);
}

}  // TEST_SUITE
