#pragma once

// Gauss-Legendre quadrature on [0,1]. Nodes are Newton-refined roots of the
// Legendre polynomial started from the Chebyshev angles; an m-point rule
// integrates polynomials up to degree 2m-1 exactly.

#include <cmath>
#include <cstddef>
#include <vector>

namespace wfem {

struct QuadratureRule {
  std::vector<double> points;   // in (0,1)
  std::vector<double> weights;  // sum to 1
};

inline QuadratureRule gauss_legendre(std::size_t m) {
  QuadratureRule rule;
  rule.points.resize(m);
  rule.weights.resize(m);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < m; ++i) {
    // Root of P_m on [-1,1], counted from the right.
    double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(m) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Three-term recurrence for P_m(x) and P'_m(x).
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map from [-1,1] to [0,1]; order nodes ascending.
    rule.points[m - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[m - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace wfem
