#include "quadrature.hh"

#include <cmath>

#include "errors.hh"

namespace sh {

QuadratureRule gauss_legendre(int npoints) {
  require(npoints >= 1 && npoints <= 4096, ErrorCode::invalid_argument,
          "quadrature: point count out of range");
  QuadratureRule rule;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);
  const double pi = 3.14159265358979323846;
  const int half = (npoints + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-angle initial guess, then Newton on P_n.
    double x = std::cos(pi * (i + 0.75) / (npoints + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= npoints; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = npoints * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[npoints - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[npoints - 1 - i] = w;
  }
  if (npoints % 2 == 1) rule.nodes[npoints / 2] = 0.0;
  return rule;
}

QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, ErrorCode::invalid_argument,
          "quadrature: bad interval");
  QuadratureRule out;
  out.nodes.reserve(rule.nodes.size());
  out.weights.reserve(rule.weights.size());
  const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    out.nodes.push_back(mid + rad * rule.nodes[i]);
    out.weights.push_back(rad * rule.weights[i]);
  }
  return out;
}

}  // namespace sh
