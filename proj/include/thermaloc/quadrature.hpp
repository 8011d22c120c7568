#pragma once

#include <vector>

namespace thermaloc {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `order` nodes mapped to [a, b]. Exact for
/// polynomials of degree 2 * order - 1.
QuadratureRule gauss_legendre(int order, double a = 0.0, double b = 1.0);

}  // namespace thermaloc
