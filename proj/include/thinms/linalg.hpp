#pragma once

#include "thinms/types.hpp"

#include <memory>
#include <string>

namespace thinms {

/// Sparse direct LU factorization; UMFPACK when available, Eigen::SparseLU otherwise.
class SparseLu {
public:
  SparseLu();
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  /// Throws Error with size and symmetry diagnostics when the matrix is singular.
  void factorize(const SparseMatrix& matrix, const std::string& context = "sparse system");
  Vector solve(const Vector& rhs) const;
  Matrix solve(const Matrix& rhs) const;
  bool ready() const;
  int rows() const { return rows_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int rows_ = 0;
};

/// Relative asymmetry max|A - A^T| / max|A| (0 for the zero matrix).
double relative_asymmetry(const SparseMatrix& a);
double relative_asymmetry(const Matrix& a);
double max_abs(const SparseMatrix& a);

/// Eigenpairs of A x = lambda S x for symmetric A and positive semidefinite S.
/// The pencil is solved on the dominant subspace of S (eigenvalues of S above
/// `rank_tol` times its largest); the directions in S's numerical null space
/// follow with eigenvalue +infinity. Finite eigenvalues come first, ascending,
/// with S-orthonormal vectors.
struct GeneralizedEigen {
  Vector values;
  Matrix vectors;
  int regular = 0;
};
GeneralizedEigen generalized_symmetric_eigen(const Matrix& a, const Matrix& s, double rank_tol = 1e-12);

/// Matrix Market coordinate/real/general text with 1-based indices and %.17g values.
void write_matrix_market(const std::string& path, const SparseMatrix& a);

/// Restricts a dense square matrix / vector to the given index list.
Matrix select(const Matrix& a, const std::vector<int>& idx);
Vector select(const Vector& v, const std::vector<int>& idx);

}  // namespace thinms
