// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace rsls {

// Gauss-Legendre nodes and weights on [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(int order, double a, double b);

}  // namespace rsls
