#pragma once

#include <array>
#include <vector>

namespace r13 {

/// Points are reference coordinates: (xi, eta) on the unit triangle, (t, 0) on [0,1].
struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;  // polynomial exactness
};

/// Symmetric rule on {xi, eta >= 0, xi + eta <= 1}; weights sum to 1/2.
/// Supported exactness degrees: 0..6.
QuadratureRule triangle_quadrature(int exactness_degree);

/// Gauss-Legendre rule on [0,1]; weights sum to 1. Any degree 0..63.
QuadratureRule edge_quadrature(int exactness_degree);

}  // namespace r13
