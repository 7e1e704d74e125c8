#pragma once

// Block spectral symbol of the uniform-mesh stiffness sequence:
//
//   f(theta) = alpha + beta e^{i theta} + beta^T e^{-i theta},
//
// an r x r Hermitian matrix-valued trigonometric polynomial. alpha is the
// leading r x r window of the local stiffness with the two endpoint
// contributions folded onto its (0,0) entry; beta carries the coupling of an
// element's right endpoint to its other dofs and is nonzero only in its
// first row. The Dirichlet stiffness matrix on n uniform elements, rescaled
// by h = 1/n, is the principal submatrix of the block Toeplitz matrix
// T_n(f) obtained by deleting the first row and column.

#include <cmath>
#include <complex>
#include <cstddef>
#include <ostream>
#include <vector>

#include "wfem/dense.hpp"
#include "wfem/reference.hpp"

namespace wfem {

inline constexpr double kPi = 3.14159265358979323846;

struct SpectralSymbol {
  std::size_t r = 0;
  Matrix alpha;  // r x r, symmetric
  Matrix beta;   // r x r, rows 2..r zero
};

inline SpectralSymbol build_symbol(const ReferenceElement& elem) {
  const std::size_t r = elem.degree();
  const Matrix a = local_stiffness(elem).weights;
  SpectralSymbol sym;
  sym.r = r;
  sym.alpha = Matrix(r, r);
  sym.beta = Matrix(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) sym.alpha(i, j) = a(i, j);
  sym.alpha(0, 0) += a(r, r);
  for (std::size_t j = 0; j < r; ++j) sym.beta(0, j) = a(r, j);
  return sym;
}

inline CMatrix symbol_at(const SpectralSymbol& sym, double theta) {
  const std::size_t r = sym.r;
  const cxd ep(std::cos(theta), std::sin(theta));
  const cxd em = std::conj(ep);
  CMatrix f(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      f(i, j) = cxd(sym.alpha(i, j), 0.0) + ep * sym.beta(i, j) + em * sym.beta(j, i);
  return f;
}

struct EigencurveSample {
  std::vector<double> thetas;
  // curves[k] holds the r eigenvalues of f(thetas[k]), ascending.
  std::vector<std::vector<double>> curves;
};

// Samples the r eigenvalue branches on a uniform grid over [-pi, pi].
// An odd grid size keeps theta = 0 on the grid.
inline EigencurveSample eigencurves(const SpectralSymbol& sym,
                                    std::size_t grid_size = 2049) {
  EigencurveSample s;
  s.thetas.resize(grid_size);
  s.curves.resize(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double theta =
        -kPi + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(grid_size - 1);
    s.thetas[k] = theta;
    s.curves[k] = hermitian_eigenvalues(symbol_at(sym, theta));
  }
  return s;
}

// Max over the grid of |det f(theta) - (det V^{-1})^2 d_r (2 - 2cos theta)|
// normalized by (2 - 2cos theta); points too close to the zero at theta = 0
// are skipped.
inline double determinant_identity_check(const SpectralSymbol& sym,
                                         const ReferenceElement& elem,
                                         std::size_t grid_size = 513) {
  const double prefactor = interior_gram_det(elem.degree()) /
                           (elem.vandermonde_det() * elem.vandermonde_det());
  double worst = 0.0;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double theta =
        -kPi + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const double shape = 2.0 - 2.0 * std::cos(theta);
    if (std::abs(shape) < 1e-8) continue;
    const cxd det = cmatrix_det(symbol_at(sym, theta));
    worst = std::max(worst, std::abs(det - cxd(prefactor * shape, 0.0)) / shape);
  }
  return worst;
}

// Half second derivative of the smallest eigenvalue branch at theta = 0,
// from a least-squares quadratic fit over 11 points on |theta| <= 0.05.
inline double lambda1_curvature_half(const SpectralSymbol& sym) {
  constexpr std::size_t kPts = 11;
  constexpr double kHalfWidth = 0.05;
  double s0 = 0, s2 = 0, s4 = 0, y0 = 0, y2 = 0;
  for (std::size_t k = 0; k < kPts; ++k) {
    const double theta = -kHalfWidth + 2.0 * kHalfWidth * static_cast<double>(k) /
                                           static_cast<double>(kPts - 1);
    const double lam1 = hermitian_eigenvalues(symbol_at(sym, theta)).front();
    const double t2 = theta * theta;
    s0 += 1.0;
    s2 += t2;
    s4 += t2 * t2;
    y0 += lam1;
    y2 += lam1 * t2;
  }
  // Even fit a0 + a2 theta^2 (the odd coefficient decouples on the
  // symmetric grid).
  return (s0 * y2 - s2 * y0) / (s0 * s4 - s2 * s2);
}

// Symbol-based estimate of the spectral condition number of the n-element
// stiffness matrix: the largest branch peaks at max lambda_r while the
// smallest eigenvalue behaves like c2 (pi/n)^2, giving
// kappa ~ n^2 max lambda_r / (c2 pi^2).
inline double conditioning_estimate(const SpectralSymbol& sym, std::size_t n,
                                    std::size_t grid_size = 2049) {
  double peak = 0.0;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double theta =
        -kPi + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(grid_size - 1);
    peak = std::max(peak, hermitian_eigenvalues(symbol_at(sym, theta)).back());
  }
  const double c2 = lambda1_curvature_half(sym);
  const double dn = static_cast<double>(n);
  return dn * dn * peak / (c2 * kPi * kPi);
}

inline void write_eigencurves_csv(const EigencurveSample& s, std::ostream& os) {
  const std::size_t r = s.curves.empty() ? 0 : s.curves.front().size();
  os << "theta";
  for (std::size_t j = 0; j < r; ++j) os << ",lambda_" << (j + 1);
  os << "\n";
  os.precision(17);
  for (std::size_t k = 0; k < s.thetas.size(); ++k) {
    os << s.thetas[k];
    for (double v : s.curves[k]) os << ',' << v;
    os << "\n";
  }
}

}  // namespace wfem
