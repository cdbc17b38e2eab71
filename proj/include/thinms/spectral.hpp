#pragma once

#include "thinms/types.hpp"

#include <chrono>
#include <functional>
#include <string_view>

namespace thinms {

enum class BasisType { Type1, Type2 };

std::string_view to_string(BasisType type);
BasisType basis_type_from_string(std::string_view text);

/// Spectral modes of one snapshot family on one domain.
struct SpectralBasis {
  /// Finite eigenvalues, ascending.
  Vector eigenvalues;
  /// Fine local vectors of the leading modes, one per column (at most the
  /// requested maximum and never more than the number of finite eigenvalues).
  Matrix modes;
  /// Snapshots after unit S-norm scaling; zero snapshots are dropped.
  Matrix snapshots;
  /// Reduced pencil and its eigenvectors in snapshot coordinates.
  Matrix reduced_a;
  Matrix reduced_s;
  Matrix coefficients;
  /// Number of S-nonsingular directions of the snapshot space.
  int rank = 0;
};

/// Solves (Phi^T A Phi) x = lambda (Phi^T S Phi) x on normalized snapshots Phi
/// and keeps up to `max_modes` smallest-eigenvalue modes.
SpectralBasis spectral_reduce(const Matrix& snapshots, const SparseMatrix& a, const SparseMatrix& s, int max_modes);

/// Wall-clock timer; lap() returns seconds since construction or the previous lap.
class Stopwatch {
public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Runs fn(0..n-1) on up to `threads` worker threads. Exceptions from workers
/// are rethrown on the caller, lowest index first.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace thinms
