#include "thinms/quadrature.hpp"

#include <cmath>
#include <string>

namespace thinms {

namespace {

void add_orbit3(TriangleRule& rule, double a, double w) {
  double b = 1.0 - 2.0 * a;
  rule.points.emplace_back(a, a);
  rule.points.emplace_back(b, a);
  rule.points.emplace_back(a, b);
  for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

}  // namespace

TriangleRule triangle_rule(int order) {
  if (order < 1 || order > 5) throw Error("unsupported triangle quadrature order " + std::to_string(order));
  TriangleRule rule;
  rule.order = order;
  switch (order) {
    case 1:
      rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
      rule.weights.push_back(0.5);
      break;
    case 2:
      add_orbit3(rule, 1.0 / 6.0, 1.0 / 6.0);
      break;
    case 3:
    case 4:
      // Dunavant degree-4 rule, 6 points.
      add_orbit3(rule, 0.445948490915964886, 0.223381589678011466 / 2.0);
      add_orbit3(rule, 0.091576213509770743, 0.109951743655321868 / 2.0);
      break;
    case 5: {
      // Radon degree-5 rule, 7 points.
      const double s = std::sqrt(15.0);
      rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
      rule.weights.push_back(9.0 / 80.0);
      add_orbit3(rule, (6.0 - s) / 21.0, (155.0 - s) / 2400.0);
      add_orbit3(rule, (6.0 + s) / 21.0, (155.0 + s) / 2400.0);
      break;
    }
  }
  return rule;
}

SegmentRule segment_rule(int order) {
  if (order < 1 || order > 5) throw Error("unsupported segment quadrature order " + std::to_string(order));
  SegmentRule rule;
  rule.order = order;
  const int n = order / 2 + 1;
  std::vector<double> x, w;
  if (n == 1) {
    x = {0.0};
    w = {2.0};
  } else if (n == 2) {
    double a = 1.0 / std::sqrt(3.0);
    x = {-a, a};
    w = {1.0, 1.0};
  } else {
    double a = std::sqrt(3.0 / 5.0);
    x = {-a, 0.0, a};
    w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  }
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(0.5 * (x[i] + 1.0));
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

const TriangleRule& cell_rule() {
  static const TriangleRule rule = triangle_rule(kCellOrder);
  return rule;
}

const SegmentRule& facet_rule() {
  static const SegmentRule rule = segment_rule(kFacetOrder);
  return rule;
}

}  // namespace thinms
