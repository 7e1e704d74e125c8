#pragma once

// Reference element on [0,1] whose degrees of freedom are point evaluations
// at r+1 prescribed points 0 = xi_1 < ... < xi_{r+1} = 1. The generalized
// Vandermonde matrix V_{ij} = ell_j(xi_i) (ell_j the equispaced Lagrange
// basis of degree r) connects the two bases; the dual coefficients
// W = V^{-T} expand the dof-dual basis in the equispaced one. The element's
// local stiffness comes in both bases:
//
//   lagrangian B: B_{ij} = int_0^1 ell_i' ell_j'
//   weights    A: A = V^{-T} B V^{-1}, computed by quadrature of the dual
//                 basis derivatives so that downstream assembly reproduces
//                 the same floating-point values entry for entry.

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wfem/dense.hpp"
#include "wfem/errors.hpp"
#include "wfem/lagrange.hpp"
#include "wfem/quadrature.hpp"

namespace wfem {

class ReferenceElement {
 public:
  explicit ReferenceElement(std::vector<double> points)
      : points_(std::move(points)), basis_(make_basis(points_)) {
    validate();
    build_vandermonde();
    build_dual();
  }

  std::size_t degree() const { return points_.size() - 1; }
  const std::vector<double>& points() const { return points_; }
  const LagrangeBasis& equispaced_basis() const { return basis_; }

  const Matrix& vandermonde() const { return v_; }
  const Matrix& vandermonde_inverse() const { return vinv_; }
  // W = V^{-T}: row i holds the equispaced-basis coefficients of the dual
  // function attached to dof i.
  const Matrix& dual_coefficients() const { return w_; }
  double vandermonde_det() const { return detv_; }

  // Values / derivatives of all r+1 dual basis functions at x.
  std::vector<double> dual_values_at(double x) const {
    return combine(basis_.values_at(x));
  }
  std::vector<double> dual_derivatives_at(double x) const {
    return combine(basis_.derivatives_at(x));
  }

 private:
  static LagrangeBasis make_basis(const std::vector<double>& pts) {
    if (pts.size() < 2)
      throw DegenerateNodes("reference element: need at least two points");
    return LagrangeBasis(equispaced_nodes(pts.size() - 1));
  }

  void validate() {
    if (std::abs(points_.front()) > 1e-14 || std::abs(points_.back() - 1.0) > 1e-14)
      throw BoundaryViolation("reference element: points must start at 0 and end at 1");
    points_.front() = 0.0;
    points_.back() = 1.0;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
      if (!(points_[i + 1] - points_[i] > 1e-14))
        throw DegenerateNodes("reference element: points must increase strictly");
  }

  void build_vandermonde() {
    const std::size_t m = points_.size();
    v_ = Matrix(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::vector<double> row = basis_.values_at(points_[i]);
      for (std::size_t j = 0; j < m; ++j) v_(i, j) = row[j];
    }
  }

  void build_dual() {
    LuFactor lu(v_);
    if (!lu.ok())
      throw SingularVandermonde("reference element: Vandermonde numerically singular");
    detv_ = lu.det();
    vinv_ = lu.inverse();
    // One-norm condition estimate; evaluation-point sets this badly
    // conditioned are useless downstream.
    double nv = 0.0, ni = 0.0;
    for (std::size_t j = 0; j < v_.cols(); ++j) {
      double cv = 0.0, ci = 0.0;
      for (std::size_t i = 0; i < v_.rows(); ++i) {
        cv += std::abs(v_(i, j));
        ci += std::abs(vinv_(i, j));
      }
      nv = std::max(nv, cv);
      ni = std::max(ni, ci);
    }
    if (nv * ni > 1e12)
      throw SingularVandermonde("reference element: Vandermonde condition exceeds 1e12");
    w_ = vinv_.transposed();
  }

  std::vector<double> combine(const std::vector<double>& lag) const {
    const std::size_t m = points_.size();
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += w_(i, j) * lag[j];
      out[i] = s;
    }
    return out;
  }

  std::vector<double> points_;
  LagrangeBasis basis_;
  Matrix v_, vinv_, w_;
  double detv_ = 0.0;
};

// Symmetric evaluation-point families: the left-half interior parameters are
// mirrored around 1/2, with 1/2 itself included for even degree.
//   degree 3, {xi}       -> {0, xi, 1-xi, 1}
//   degree 4, {xi}       -> {0, xi, 1/2, 1-xi, 1}
//   degree 5, {xa, xb}   -> {0, xa, xb, 1-xb, 1-xa, 1}
inline std::vector<double> symmetric_points(std::size_t degree,
                                            const std::vector<double>& left) {
  if (degree < 2 || left.size() != (degree - 1) / 2)
    throw DegenerateNodes("symmetric_points: wrong parameter count for degree");
  std::vector<double> pts;
  pts.push_back(0.0);
  for (double x : left) pts.push_back(x);
  if (degree % 2 == 0) pts.push_back(0.5);
  for (std::size_t i = left.size(); i-- > 0;) pts.push_back(1.0 - left[i]);
  pts.push_back(1.0);
  return pts;
}

inline ReferenceElement symmetric_element(std::size_t degree, double xi) {
  return ReferenceElement(symmetric_points(degree, {xi}));
}

inline ReferenceElement equispaced_element(std::size_t degree) {
  return ReferenceElement(equispaced_nodes(degree));
}

struct LocalStiffness {
  Matrix lagrangian;  // Gram of equispaced Lagrange derivatives
  Matrix weights;     // same bilinear form in the dual (dof) basis
};

// Gram matrix of the equispaced Lagrange derivatives of the given degree,
// by an (r+1)-point Gauss rule (exact: the integrand has degree 2r-2).
inline Matrix equispaced_lagrange_derivative_gram(std::size_t degree) {
  const LagrangeBasis basis(equispaced_nodes(degree));
  const QuadratureRule rule = gauss_legendre(degree + 1);
  const std::size_t m = degree + 1;
  Matrix b(m, m);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const std::vector<double> d = basis.derivatives_at(rule.points[q]);
    const double w = rule.weights[q];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) b(i, j) += w * d[i] * d[j];
  }
  return b;
}

// Derivative table of the dual basis at the rule points: row q holds all
// r+1 dual derivatives at point q. Shared by the local stiffness and by
// global assembly so the two produce identical floating-point entries.
inline Matrix dual_derivative_table(const ReferenceElement& elem,
                                    const QuadratureRule& rule) {
  const std::size_t m = elem.degree() + 1;
  Matrix t(rule.points.size(), m);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const std::vector<double> d = elem.dual_derivatives_at(rule.points[q]);
    for (std::size_t i = 0; i < m; ++i) t(q, i) = d[i];
  }
  return t;
}

// sum_q w_q c_q D_{qi} D_{qj}, the coefficient-weighted dual derivative Gram.
inline Matrix weighted_dual_gram(const Matrix& table, const QuadratureRule& rule,
                                 std::span<const double> coeff_at_points) {
  const std::size_t m = table.cols();
  Matrix a(m, m);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double wc = rule.weights[q] * coeff_at_points[q];
    for (std::size_t i = 0; i < m; ++i) {
      const double di = table(q, i);
      for (std::size_t j = 0; j < m; ++j) a(i, j) += wc * di * table(q, j);
    }
  }
  return a;
}

inline std::size_t stiffness_rule_size(std::size_t degree) { return 2 * degree + 2; }

inline LocalStiffness local_stiffness(const ReferenceElement& elem) {
  const std::size_t r = elem.degree();
  LocalStiffness ls;
  ls.lagrangian = equispaced_lagrange_derivative_gram(r);
  const QuadratureRule rule = gauss_legendre(stiffness_rule_size(r));
  const Matrix table = dual_derivative_table(elem, rule);
  const std::vector<double> ones(rule.points.size(), 1.0);
  ls.weights = weighted_dual_gram(table, rule, ones);
  return ls;
}

// det of the interior minor [<ell_i', ell_j'>]_{i,j=2..r} of the equispaced
// derivative Gram; the theta-independent factor of the symbol determinant.
inline double interior_gram_det(std::size_t degree) {
  const Matrix b = equispaced_lagrange_derivative_gram(degree);
  const std::size_t m = degree - 1;
  if (m == 0) return 1.0;
  Matrix inner(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) inner(i, j) = b(i + 1, j + 1);
  return LuFactor(inner).det();
}

}  // namespace wfem
