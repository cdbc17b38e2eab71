#pragma once

#include "thinms/types.hpp"

#include <vector>

namespace thinms {

/// Rule on the reference triangle {(x, y) : x, y >= 0, x + y <= 1}; weights sum to 1/2.
struct TriangleRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int order = 0;
};

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
  int order = 0;
};

/// Exact for polynomials of total degree <= order, 1 <= order <= 5.
TriangleRule triangle_rule(int order);
/// Exact for polynomials of degree <= order, 1 <= order <= 5.
SegmentRule segment_rule(int order);

/// Orders used throughout assembly.
inline constexpr int kCellOrder = 4;
inline constexpr int kFacetOrder = 5;

const TriangleRule& cell_rule();
const SegmentRule& facet_rule();

}  // namespace thinms
