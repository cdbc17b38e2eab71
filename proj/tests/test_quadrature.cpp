#include "thinms/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace thinms;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("triangle rules integrate every monomial up to their order") {
  for (int order = 1; order <= 5; ++order) {
    const TriangleRule rule = triangle_rule(order);
    CAPTURE(order);
    double weight_sum = 0.0;
    for (double w : rule.weights) weight_sum += w;
    CHECK(weight_sum == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a <= order; ++a)
      for (int b = 0; a + b <= order; ++b) {
        double sum = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q)
          sum += rule.weights[q] * std::pow(rule.points[q].x(), a) * std::pow(rule.points[q].y(), b);
        // int_T x^a y^b = a! b! / (a + b + 2)!
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(sum - exact) < 1e-14);
      }
  }
}

TEST_CASE("product of two P1 basis functions") {
  const TriangleRule& rule = cell_rule();
  double same = 0.0, other = 0.0;
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const double l0 = 1.0 - rule.points[q].x() - rule.points[q].y();
    same += rule.weights[q] * l0 * l0;
    other += rule.weights[q] * l0 * rule.points[q].x();
  }
  CHECK(same == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(other == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("segment rules integrate every monomial up to their order") {
  for (int order = 1; order <= 5; ++order) {
    const SegmentRule rule = segment_rule(order);
    for (int k = 0; k <= order; ++k) {
      double sum = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) sum += rule.weights[q] * std::pow(rule.points[q], k);
      CHECK(std::abs(sum - 1.0 / (k + 1)) < 1e-14);
    }
  }
  const SegmentRule& f = facet_rule();
  double s2 = 0.0;
  for (size_t q = 0; q < f.points.size(); ++q) s2 += f.weights[q] * f.points[q] * f.points[q];
  CHECK(s2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("unsupported orders are rejected") {
  CHECK_THROWS(triangle_rule(0));
  CHECK_THROWS(triangle_rule(6));
  CHECK_THROWS(segment_rule(6));
}
