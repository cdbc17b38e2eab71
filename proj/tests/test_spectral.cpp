#include "thinms/linalg.hpp"
#include "thinms/spectral.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <atomic>
#include <random>
#include <stdexcept>

using namespace thinms;

namespace {

Matrix random_matrix(int rows, int cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

// Orthogonal projector onto the column space of m.
Matrix projector(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const double tol = 1e-10 * svd.singularValues()(0);
  int r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > tol) ++r;
  const Matrix u = svd.matrixU().leftCols(r);
  return u * u.transpose();
}

SparseMatrix sparse(const Matrix& m) { return m.sparseView(); }

}  // namespace

TEST_CASE("generalized eigenpairs: residual, ordering and S-orthonormality") {
  const int n = 12;
  const Matrix g = random_matrix(n, n, 1);
  const Matrix a = g * g.transpose();
  const Matrix h = random_matrix(n, n, 2);
  const Matrix s = h * h.transpose() + Matrix::Identity(n, n);
  const GeneralizedEigen e = generalized_symmetric_eigen(a, s);
  REQUIRE(e.regular == n);
  for (int k = 0; k < n; ++k) {
    const double lambda = e.values[k];
    const double res = (a * e.vectors.col(k) - lambda * s * e.vectors.col(k)).norm();
    CHECK(res <= 1e-8 * (a.norm() + std::abs(lambda) * s.norm()));
    if (k > 0) CHECK(e.values[k] >= e.values[k - 1]);
  }
  const Matrix gram = e.vectors.transpose() * s * e.vectors;
  CHECK((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);

  // Independent dense solver.
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ref(a, s);
  CHECK((ref.eigenvalues() - e.values).cwiseAbs().maxCoeff() < 1e-8 * ref.eigenvalues().cwiseAbs().maxCoeff());
}

TEST_CASE("singular S: regular directions first, the rest at infinity") {
  const int n = 8, rank = 5;
  const Matrix g = random_matrix(n, n, 3);
  const Matrix a = g * g.transpose() + Matrix::Identity(n, n);
  const Matrix h = random_matrix(n, rank, 4);
  const Matrix s = h * h.transpose();
  const GeneralizedEigen e = generalized_symmetric_eigen(a, s);
  CHECK(e.regular == rank);
  // The pencil is restricted to range(S): vectors lie in it and the residual
  // vanishes there.
  const Matrix range = projector(h);
  for (int k = 0; k < rank; ++k) {
    CHECK(std::isfinite(e.values[k]));
    const Vector x = e.vectors.col(k);
    CHECK((x - range * x).norm() < 1e-10 * x.norm());
    CHECK((range * (a * x - e.values[k] * s * x)).norm() <= 1e-8 * (a.norm() + std::abs(e.values[k]) * s.norm()));
  }
  for (int k = rank; k < e.values.size(); ++k) CHECK(std::isinf(e.values[k]));
}

TEST_CASE("spectral reduction keeps the snapshot span and is scale invariant") {
  const int n = 30, m = 9;
  const Matrix g = random_matrix(n, n, 5);
  const SparseMatrix a = sparse(g * g.transpose());
  const Matrix h = random_matrix(n, n, 6);
  const SparseMatrix s = sparse(h * h.transpose() + 0.1 * Matrix::Identity(n, n));
  const Matrix snaps = random_matrix(n, m, 7);

  const SpectralBasis full = spectral_reduce(snaps, a, s, m);
  CHECK(full.rank == m);
  CHECK(full.modes.cols() == m);
  CHECK((projector(full.modes) - projector(snaps)).norm() < 1e-8);
  const double a_norm = full.reduced_a.norm();
  for (int k = 0; k < full.eigenvalues.size(); ++k) CHECK(full.eigenvalues[k] >= -1e-10 * a_norm);
  const Matrix gram = full.modes.transpose() * (s * full.modes);
  CHECK((gram - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-8);

  const SpectralBasis part = spectral_reduce(snaps, a, s, 4);
  const SpectralBasis scaled = spectral_reduce(37.5 * snaps, a, s, 4);
  REQUIRE(part.modes.cols() == 4);
  CHECK((projector(part.modes) - projector(scaled.modes)).norm() < 1e-8);
  for (int k = 0; k < 4; ++k) CHECK(part.eigenvalues[k] == doctest::Approx(scaled.eigenvalues[k]).epsilon(1e-10));
}

TEST_CASE("zero snapshots are dropped") {
  const int n = 10;
  const SparseMatrix eye = sparse(Matrix::Identity(n, n));
  Matrix snaps = random_matrix(n, 3, 8);
  snaps.col(1).setZero();
  const SpectralBasis b = spectral_reduce(snaps, eye, eye, 5);
  CHECK(b.snapshots.cols() == 2);
  CHECK(b.modes.cols() == 2);
}

TEST_CASE("parallel_for runs every index and rethrows the lowest failure") {
  std::atomic<int> sum{0};
  parallel_for(100, 4, [&](int i) { sum += i; });
  CHECK(sum == 4950);
  try {
    parallel_for(10, 3, [](int i) {
      if (i == 7 || i == 3) throw std::runtime_error("index " + std::to_string(i));
    });
    FAIL("no exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "index 3");
  }
}

TEST_CASE("linear algebra helpers") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.5, 4.0;
  CHECK(relative_asymmetry(m) == doctest::Approx(0.125));
  CHECK(max_abs(sparse(m)) == 4.0);
  SparseLu lu;
  lu.factorize(sparse(m));
  Vector b(2);
  b << 1.0, 2.0;
  CHECK((m * lu.solve(b) - b).norm() < 1e-14);
  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  SparseLu bad;
  CHECK_THROWS_AS(bad.factorize(sparse(singular)), Error);
  CHECK(select(m, std::vector<int>{1})(0, 0) == 4.0);
}
