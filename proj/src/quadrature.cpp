// SPDX-License-Identifier: Apache-2.0

#include "rsls/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace rsls {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

// Newton iteration on the Legendre polynomial, using the three-term
// recurrence for P_n and the derivative identity
// P'_n(x) = n (x P_n(x) - P_{n-1}(x)) / (x^2 - 1).
QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) {
    throw std::invalid_argument("gauss_legendre: order must be >= 1");
  }
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Nodes come out in decreasing order of x; store symmetrically.
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }

  const double mid = 0.5 * (a + b);
  const double scale = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = mid + scale * rule.nodes[i];
    rule.weights[i] *= scale;
  }
  return rule;
}

}  // namespace rsls
