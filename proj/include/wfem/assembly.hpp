#pragma once

// Global assembly of the 1D diffusion bilinear form int b u' v' with
// homogeneous Dirichlet conditions. Element k of length h_k contributes
// (1/h_k) times the coefficient-weighted dual derivative Gram; element k's
// local dof i sits at global index k*r + i on the full grid 0..n*r, and the
// two boundary dofs are eliminated, leaving order n*r - 1 and scalar half
// bandwidth r. On a uniform mesh with b = 1 the assembled matrix equals
// 1/h times the block Toeplitz section described in symbol.hpp; helpers
// below rescale by h and append the fictitious identity equation in front
// of the system for the circulant preconditioners.

#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "wfem/banded.hpp"
#include "wfem/errors.hpp"
#include "wfem/mesh.hpp"
#include "wfem/reference.hpp"

namespace wfem {

struct StiffnessSystem {
  SymmetricBandMatrix matrix;  // Dirichlet-eliminated, order n*r - 1
  std::vector<double> rhs;     // matching length (zero until a load is set)
  Mesh1D mesh;
  ReferenceElement elem;
  Coefficient coeff;

  std::size_t degree() const { return elem.degree(); }
  std::size_t elements() const { return mesh.elements(); }

  // (element k, local dof i) -> full-grid index; 0 and n*r are boundary.
  std::size_t ltg(std::size_t k, std::size_t i) const {
    return k * degree() + i;
  }
};

inline StiffnessSystem assemble(const Mesh1D& mesh, const ReferenceElement& elem,
                                const Coefficient& coeff) {
  const std::size_t r = elem.degree();
  const std::size_t n = mesh.elements();
  const std::size_t order = n * r - 1;
  StiffnessSystem sys{SymmetricBandMatrix(order, r),
                      std::vector<double>(order, 0.0), mesh, elem, coeff};

  const QuadratureRule rule = gauss_legendre(stiffness_rule_size(r));
  const Matrix table = dual_derivative_table(elem, rule);
  std::vector<double> bq(rule.points.size());
  const std::size_t last = n * r;  // full-grid boundary index on the right

  for (std::size_t k = 0; k < n; ++k) {
    const double a = mesh.element_start(k);
    const double h = mesh.element_length(k);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      bq[q] = coeff(a + h * rule.points[q]);
      if (!(bq[q] > 0.0))
        throw NonPositiveCoefficient("assemble: coefficient not positive at " +
                                     std::to_string(a + h * rule.points[q]));
    }
    const Matrix local = weighted_dual_gram(table, rule, bq);
    const double inv_h = 1.0 / h;
    for (std::size_t i = 0; i <= r; ++i) {
      const std::size_t gi = sys.ltg(k, i);
      if (gi == 0 || gi == last) continue;
      for (std::size_t j = 0; j <= i; ++j) {
        const std::size_t gj = sys.ltg(k, j);
        if (gj == 0 || gj == last) continue;
        sys.matrix.add(gi - 1, gj - 1, local(i, j) * inv_h);
      }
    }
  }
  return sys;
}

// Load vector over the full grid (boundary entries included), length n*r + 1.
inline std::vector<double> assemble_rhs(const Mesh1D& mesh,
                                        const ReferenceElement& elem,
                                        const std::function<double(double)>& f) {
  const std::size_t r = elem.degree();
  const std::size_t n = mesh.elements();
  std::vector<double> load(n * r + 1, 0.0);

  const QuadratureRule rule = gauss_legendre(stiffness_rule_size(r));
  Matrix values(rule.points.size(), r + 1);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const std::vector<double> v = elem.dual_values_at(rule.points[q]);
    for (std::size_t i = 0; i <= r; ++i) values(q, i) = v[i];
  }

  for (std::size_t k = 0; k < n; ++k) {
    const double a = mesh.element_start(k);
    const double h = mesh.element_length(k);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double wf = h * rule.weights[q] * f(a + h * rule.points[q]);
      for (std::size_t i = 0; i <= r; ++i) load[k * r + i] += wf * values(q, i);
    }
  }
  return load;
}

// Strips the two boundary entries of a full-grid vector.
inline std::vector<double> interior(const std::vector<double>& full) {
  return std::vector<double>(full.begin() + 1, full.end() - 1);
}

inline void set_load(StiffnessSystem& sys, const std::function<double(double)>& f) {
  sys.rhs = interior(assemble_rhs(sys.mesh, sys.elem, f));
}

// Rescales matrix and rhs by the uniform reference step h = |I|/n, the
// normalization under which the matrix embeds into T_n(f).
inline StiffnessSystem symbol_normalized(const StiffnessSystem& sys) {
  const double h = sys.mesh.length() / static_cast<double>(sys.elements());
  StiffnessSystem out = sys;
  out.matrix = sys.matrix.scaled(h);
  for (double& v : out.rhs) v *= h;
  return out;
}

// Pads the system with a fictitious identity equation occupying the front
// index (the slot the eliminated left boundary dof vacated), lifting the
// order to n*r. The padded spectrum is the original one union {1}, and
// dropping the first solution entry recovers the original solve.
inline StiffnessSystem extend_hat(const StiffnessSystem& sys) {
  const std::size_t order = sys.matrix.order();
  const std::size_t kd = sys.matrix.half_bandwidth();
  StiffnessSystem out = sys;
  out.matrix = SymmetricBandMatrix(order + 1, kd);
  out.matrix.band(0, 0) = 1.0;
  for (std::size_t d = 0; d <= kd; ++d)
    for (std::size_t i = 0; i + d < order; ++i)
      out.matrix.band(d, i + 1) = sys.matrix.band(d, i);
  out.rhs.assign(order + 1, 0.0);
  for (std::size_t i = 0; i < order; ++i) out.rhs[i + 1] = sys.rhs[i];
  return out;
}

inline std::vector<double> solve_direct(const StiffnessSystem& sys) {
  BandCholesky chol(sys.matrix);
  return chol.solve(sys.rhs);
}

// u_h'(x) on element k from the eliminated coefficient vector.
inline double fem_derivative_on_element(const StiffnessSystem& sys,
                                        const std::vector<double>& sol,
                                        std::size_t k, double xhat) {
  const std::size_t r = sys.degree();
  const std::size_t last = sys.elements() * r;
  const std::vector<double> d = sys.elem.dual_derivatives_at(xhat);
  double s = 0.0;
  for (std::size_t i = 0; i <= r; ++i) {
    const std::size_t g = sys.ltg(k, i);
    if (g == 0 || g == last) continue;
    s += sol[g - 1] * d[i];
  }
  return s / sys.mesh.element_length(k);
}

inline double fem_value_on_element(const StiffnessSystem& sys,
                                   const std::vector<double>& sol, std::size_t k,
                                   double xhat) {
  const std::size_t r = sys.degree();
  const std::size_t last = sys.elements() * r;
  const std::vector<double> v = sys.elem.dual_values_at(xhat);
  double s = 0.0;
  for (std::size_t i = 0; i <= r; ++i) {
    const std::size_t g = sys.ltg(k, i);
    if (g == 0 || g == last) continue;
    s += sol[g - 1] * v[i];
  }
  return s;
}

/// |u_h - u|_{H^1}: elementwise Gauss quadrature of (u_h' - du)^2.
inline double h1_seminorm_error(const StiffnessSystem& sys,
                                const std::vector<double>& sol,
                                const std::function<double(double)>& du) {
  const std::size_t r = sys.degree();
  const QuadratureRule rule = gauss_legendre(2 * r + 4);
  Matrix table = dual_derivative_table(sys.elem, rule);
  const std::size_t last = sys.elements() * r;
  double acc = 0.0;
  for (std::size_t k = 0; k < sys.elements(); ++k) {
    const double a = sys.mesh.element_start(k);
    const double h = sys.mesh.element_length(k);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      double uh = 0.0;
      for (std::size_t i = 0; i <= r; ++i) {
        const std::size_t g = sys.ltg(k, i);
        if (g == 0 || g == last) continue;
        uh += sol[g - 1] * table(q, i);
      }
      uh /= h;
      const double diff = uh - du(a + h * rule.points[q]);
      acc += h * rule.weights[q] * diff * diff;
    }
  }
  return std::sqrt(acc);
}

// Coordinate text export, one "row col value" triple per line (0-based,
// both symmetric halves), 17 significant digits.
inline void write_matrix_coo(const SymmetricBandMatrix& m, std::ostream& os) {
  os.precision(17);
  const std::size_t n = m.order();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t jmax = std::min(i + m.half_bandwidth(), n - 1);
    const std::size_t jmin = i > m.half_bandwidth() ? i - m.half_bandwidth() : 0;
    for (std::size_t j = jmin; j <= jmax; ++j) {
      const double v = m.at(i, j);
      if (v != 0.0) os << i << ' ' << j << ' ' << v << "\n";
    }
  }
}

}  // namespace wfem
