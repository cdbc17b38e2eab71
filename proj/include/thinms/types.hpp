#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <string>

namespace thinms {

/// Spatial dimension of every mesh and field in the library.
inline constexpr int kDim = 2;

using Point = Eigen::Vector2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

using ScalarFn = std::function<double(const Point&)>;
using VectorFn = std::function<Point(const Point&)>;

/// Raised for invalid input, unsolvable systems and other unrecoverable states.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline ScalarFn constant(double value) {
  return [value](const Point&) { return value; };
}

}  // namespace thinms
