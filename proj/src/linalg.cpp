#include "thinms/linalg.hpp"

#include <Eigen/SparseLU>
#ifdef THINMS_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace thinms {

struct SparseLu::Impl {
#ifdef THINMS_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> lu;
#else
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
  // UmfPackLU refers to the factorized matrix during solves; keep it alive.
  SparseMatrix matrix;
  bool ok = false;
};

SparseLu::SparseLu() : impl_(std::make_unique<Impl>()) {}
SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

void SparseLu::factorize(const SparseMatrix& matrix, const std::string& context) {
  if (matrix.rows() != matrix.cols()) throw Error(context + ": matrix is not square");
  rows_ = static_cast<int>(matrix.rows());
  impl_->matrix = matrix;
  impl_->matrix.makeCompressed();
  const SparseMatrix& a = impl_->matrix;
  impl_->lu.compute(a);
  impl_->ok = impl_->lu.info() == Eigen::Success;
  if (impl_->ok) {
    // UMFPACK reports success for some exactly singular matrices; probe the solve.
    const Vector ones = Vector::Ones(rows_);
    Vector probe = impl_->lu.solve(ones);
    impl_->ok = probe.allFinite();
  }
  if (!impl_->ok) {
    std::ostringstream msg;
    msg << context << ": factorization failed (size " << rows_ << ", nnz " << a.nonZeros()
        << ", relative asymmetry " << relative_asymmetry(a) << ")";
    throw Error(msg.str());
  }
}

Vector SparseLu::solve(const Vector& rhs) const {
  if (!impl_->ok) throw Error("SparseLu::solve called before a successful factorization");
  Vector x = impl_->lu.solve(rhs);
  return x;
}

Matrix SparseLu::solve(const Matrix& rhs) const {
  if (!impl_->ok) throw Error("SparseLu::solve called before a successful factorization");
  Matrix x(rhs.rows(), rhs.cols());
  for (Eigen::Index j = 0; j < rhs.cols(); ++j) x.col(j) = impl_->lu.solve(Vector(rhs.col(j)));
  return x;
}

bool SparseLu::ready() const { return impl_->ok; }

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double relative_asymmetry(const SparseMatrix& a) {
  double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  SparseMatrix d = SparseMatrix(a.transpose()) - a;
  return max_abs(d) / scale;
}

double relative_asymmetry(const Matrix& a) {
  double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

GeneralizedEigen generalized_symmetric_eigen(const Matrix& a, const Matrix& s, double rank_tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || s.rows() != n || s.cols() != n) throw Error("generalized eigenproblem: size mismatch");
  GeneralizedEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;

  Matrix ss = 0.5 * (s + s.transpose());
  Matrix as = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> s_eig(ss);
  if (s_eig.info() != Eigen::Success) throw Error("generalized eigenproblem: eigen decomposition of S failed");
  const Vector& sigma = s_eig.eigenvalues();
  const double smax = sigma.cwiseAbs().maxCoeff();
  std::vector<int> keep, drop;
  for (Eigen::Index k = 0; k < n; ++k) (sigma[k] > rank_tol * smax && smax > 0.0 ? keep : drop).push_back(int(k));

  const int r = static_cast<int>(keep.size());
  Matrix w(n, r);
  for (int j = 0; j < r; ++j) w.col(j) = s_eig.eigenvectors().col(keep[j]) / std::sqrt(sigma[keep[j]]);
  Matrix reduced = w.transpose() * as * w;
  reduced = 0.5 * (reduced + reduced.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> r_eig(reduced);
  if (r_eig.info() != Eigen::Success) throw Error("generalized eigenproblem: reduced eigen decomposition failed");
  out.values.head(r) = r_eig.eigenvalues();
  out.vectors.leftCols(r) = w * r_eig.eigenvectors();
  out.regular = r;

  // Null-space directions of S, ordered by their A-energy.
  const int z = static_cast<int>(drop.size());
  if (z > 0) {
    Matrix v(n, z);
    for (int j = 0; j < z; ++j) v.col(j) = s_eig.eigenvectors().col(drop[j]);
    Matrix az = v.transpose() * as * v;
    Eigen::SelfAdjointEigenSolver<Matrix> z_eig(0.5 * (az + az.transpose()));
    out.vectors.rightCols(z) = v * z_eig.eigenvectors();
    out.values.tail(z).setConstant(std::numeric_limits<double>::infinity());
  }
  return out;
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  char buf[64];
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", static_cast<long long>(it.row() + 1),
                    static_cast<long long>(it.col() + 1), it.value());
      out << buf;
    }
}

Matrix select(const Matrix& a, const std::vector<int>& idx) {
  const int n = static_cast<int>(idx.size());
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = a(idx[i], idx[j]);
  return out;
}

Vector select(const Vector& v, const std::vector<int>& idx) {
  Vector out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

}  // namespace thinms
