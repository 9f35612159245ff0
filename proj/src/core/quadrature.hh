#pragma once

#include <vector>

namespace sh {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1]; exact for polynomials of degree 2*npoints - 1.
QuadratureRule gauss_legendre(int npoints);

// Affine image of a rule on [a, b], a < b.
QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b);

}  // namespace sh
