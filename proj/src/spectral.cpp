#include "thinms/spectral.hpp"

#include "thinms/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace thinms {

std::string_view to_string(BasisType type) { return type == BasisType::Type1 ? "T1" : "T2"; }

BasisType basis_type_from_string(std::string_view text) {
  if (text == "T1" || text == "type1" || text == "1") return BasisType::Type1;
  if (text == "T2" || text == "type2" || text == "2") return BasisType::Type2;
  throw Error("unknown basis type '" + std::string(text) + "'");
}

SpectralBasis spectral_reduce(const Matrix& snapshots, const SparseMatrix& a, const SparseMatrix& s, int max_modes) {
  if (snapshots.rows() != a.rows() || snapshots.rows() != s.rows())
    throw Error("spectral reduction: snapshot and form sizes differ");
  SpectralBasis out;
  Matrix s_phi = s * snapshots;
  Vector norms2 = snapshots.cwiseProduct(s_phi).colwise().sum().transpose();
  const double largest = norms2.size() > 0 ? norms2.maxCoeff() : 0.0;
  std::vector<int> keep;
  for (Eigen::Index j = 0; j < norms2.size(); ++j)
    if (norms2[j] > 1e-28 * largest && norms2[j] > 0.0) keep.push_back(static_cast<int>(j));

  out.snapshots.resize(snapshots.rows(), static_cast<Eigen::Index>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) out.snapshots.col(j) = snapshots.col(keep[j]) / std::sqrt(norms2[keep[j]]);

  out.reduced_a = out.snapshots.transpose() * (a * out.snapshots);
  out.reduced_s = out.snapshots.transpose() * (s * out.snapshots);
  GeneralizedEigen eig = generalized_symmetric_eigen(out.reduced_a, out.reduced_s);
  out.rank = eig.regular;
  const int count = std::clamp(max_modes, 0, eig.regular);
  out.eigenvalues = eig.values.head(eig.regular);
  out.coefficients = eig.vectors.leftCols(count);
  out.modes = out.snapshots * out.coefficients;
  return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  const int workers = std::clamp(threads, 1, std::max(n, 1));
  std::vector<std::exception_ptr> errors(n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace thinms
