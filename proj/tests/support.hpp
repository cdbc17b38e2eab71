#pragma once

// Shared fixtures for the unit tests.

#include "thinms/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace fixtures {

using namespace thinms;

/// Left edge x = 0 inflow, right edge x = xmax outflow, everything else wall.
inline auto end_markers(double xmax) {
  return [xmax](const Point& a, const Point& b) {
    if (std::abs(a.x()) < 1e-12 && std::abs(b.x()) < 1e-12) return FacetMarker::Inflow;
    if (std::abs(a.x() - xmax) < 1e-12 && std::abs(b.x() - xmax) < 1e-12) return FacetMarker::Outflow;
    return FacetMarker::Wall;
  };
}

/// Unit square split along its diagonal.
inline Mesh two_cells() {
  return build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}}, end_markers(1.0));
}

/// 3 x 2 node grid on [0, 2] x [0, 0.7] with jittered interior-free nodes:
/// four skewed cells touching every marker kind.
inline Mesh skewed_four(unsigned seed = 3) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  std::vector<Point> nodes{{0, 0}, {1 + jitter(rng), 0}, {2, 0}, {0, 0.7}, {1 + jitter(rng), 0.7 + jitter(rng)}, {2, 0.7}};
  return build_mesh(nodes, {{{0, 1, 4}}, {{0, 4, 3}}, {{1, 2, 4}}, {{2, 5, 4}}}, end_markers(2.0));
}

/// Eight-cell thin channel from the generator (optionally with a wavy wall).
inline Mesh channel8(bool wavy = false, double flips = 0.0) {
  ChannelParams p;
  p.length = 1.0;
  p.centerline = 0.1;
  p.mean_half_width = wavy ? 0.08 : 0.1;
  p.profile = wavy ? WallProfile::Sinusoidal : WallProfile::Straight;
  p.amplitude = wavy ? 0.02 : 0.0;
  p.wavelength = 2.0;
  p.target_h = 0.5;
  p.inlet_center = {0.0, 0.1};
  p.inlet_radius = 0.1;
  p.flip_fraction = flips;
  p.seed = 5;
  return generate_channel(p);
}

inline std::vector<Mesh> small_meshes() {
  return {two_cells(), skewed_four(), channel8(), channel8(true, 0.5)};
}

/// Straight channel [0, length] x [0, width] with inflow over the whole left end.
inline ChannelParams straight_channel(double length, double width, double h) {
  ChannelParams p;
  p.length = length;
  p.centerline = 0.5 * width;
  p.mean_half_width = 0.5 * width;
  p.target_h = h;
  p.inlet_center = {0.0, 0.5 * width};
  p.inlet_radius = 0.5 * width;
  return p;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// max|a - b| / max(1, max|b|).
inline double scaled_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return max_abs_diff(a, b) / scale;
}

}  // namespace fixtures
