#pragma once

// Small dense matrices and the factorizations the rest of the library needs:
// partially pivoted LU, Cholesky, and a cyclic Jacobi eigensolver for real
// symmetric matrices (complex Hermitian ones are handled by the standard
// [Re -Im; Im Re] embedding). Everything here targets small-to-moderate
// orders; no attempt is made at blocking or vectorization.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "wfem/errors.hpp"

namespace wfem {

using cxd = std::complex<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

// LU factorization with partial pivoting. `ok()` is false when a pivot falls
// below `pivot_tol` times the largest initial entry.
class LuFactor {
 public:
  explicit LuFactor(Matrix m, double pivot_tol = 1e-14) : lu_(std::move(m)) {
    const std::size_t n = lu_.rows();
    piv_.resize(n);
    const double scale = std::max(lu_.max_abs(), 1e-300);
    det_ = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      piv_[k] = p;
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        det_ = -det_;
      }
      const double pivot = lu_(k, k);
      if (std::abs(pivot) < pivot_tol * scale) {
        ok_ = false;
        det_ = 0.0;
        return;
      }
      det_ *= pivot;
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = lu_(i, k) / pivot;
        lu_(i, k) = f;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  bool ok() const { return ok_; }
  double det() const { return det_; }

  void solve_inplace(std::vector<double>& b) const {
    const std::size_t n = lu_.rows();
    for (std::size_t k = 0; k < n; ++k) {
      if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
      for (std::size_t i = k + 1; i < n; ++i) b[i] -= lu_(i, k) * b[k];
    }
    for (std::size_t k = n; k-- > 0;) {
      for (std::size_t j = k + 1; j < n; ++j) b[k] -= lu_(k, j) * b[j];
      b[k] /= lu_(k, k);
    }
  }

  std::vector<double> solve(std::vector<double> b) const {
    solve_inplace(b);
    return b;
  }

  Matrix inverse() const {
    const std::size_t n = lu_.rows();
    Matrix inv(n, n);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::fill(col.begin(), col.end(), 0.0);
      col[j] = 1.0;
      solve_inplace(col);
      for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
  }

 private:
  Matrix lu_;
  std::vector<int> piv_;
  double det_ = 0.0;
  bool ok_ = true;
};

// Dense Cholesky A = L L^T; empty result when A is not positive definite.
struct DenseCholesky {
  Matrix l;

  void solve_inplace(std::vector<double>& b) const {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[i];
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
      b[i] = s / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = b[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
      b[i] = s / l(i, i);
    }
  }

  // Solves L y = b (forward substitution only).
  void forward_inplace(std::vector<double>& b) const {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[i];
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
      b[i] = s / l(i, i);
    }
  }
};

inline std::optional<DenseCholesky> dense_cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  DenseCholesky f{Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= f.l(j, k) * f.l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    f.l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= f.l(i, k) * f.l(j, k);
      f.l(i, j) = s / f.l(j, j);
    }
  }
  return f;
}

// Cyclic Jacobi eigenvalues of a real symmetric matrix, ascending.
// Sweeps rotate away every off-diagonal entry in row order until the
// off-diagonal Frobenius mass drops below `tol` relative to the matrix norm.
inline std::vector<double> jacobi_eigenvalues(Matrix a, double tol = 1e-12,
                                              int max_sweeps = 100) {
  const std::size_t n = a.rows();
  if (n == 0) return {};
  if (n == 1) return {a(0, 0)};
  const double norm = std::max(a.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off) <= tol * norm) {
      std::vector<double> ev(n);
      for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
      std::sort(ev.begin(), ev.end());
      return ev;
    }
    for (std::size_t p = 0; p < n - 1; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  throw EigensolverNoConvergence("jacobi_eigenvalues: sweep limit exceeded");
}

// Complex r x r matrices, just large enough for symbol evaluation and the
// per-frequency circulant blocks.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, cxd fill = cxd(0.0, 0.0))
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  cxd& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  cxd operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cxd> a_;
};

inline cxd cmatrix_det(CMatrix m) {
  const std::size_t n = m.rows();
  cxd det(1.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      det = -det;
    }
    const cxd pivot = m(k, k);
    if (pivot == cxd(0.0, 0.0)) return cxd(0.0, 0.0);
    det *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      const cxd f = m(i, k) / pivot;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

// Eigenvalues of a Hermitian matrix through the doubled real embedding:
// each eigenvalue of H appears twice in the embedding's spectrum.
inline std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  const std::size_t r = h.rows();
  Matrix e(2 * r, 2 * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      e(i, j) = h(i, j).real();
      e(i + r, j + r) = h(i, j).real();
      e(i, j + r) = -h(i, j).imag();
      e(i + r, j) = h(i, j).imag();
    }
  const std::vector<double> doubled = jacobi_eigenvalues(std::move(e));
  std::vector<double> ev(r);
  for (std::size_t i = 0; i < r; ++i) ev[i] = doubled[2 * i];
  return ev;
}

// Hermitian positive definite Cholesky A = L L^H; throws when a pivot is
// not strictly positive.
class HermitianCholesky {
 public:
  explicit HermitianCholesky(const CMatrix& a) : l_(a.rows(), a.cols()) {
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
      double d = a(j, j).real();
      for (std::size_t k = 0; k < j; ++k) d -= std::norm(l_(j, k));
      if (!(d > 0.0) || !std::isfinite(d))
        throw SingularFrequencyBlock(
            "hermitian cholesky: block not positive definite");
      l_(j, j) = cxd(std::sqrt(d), 0.0);
      for (std::size_t i = j + 1; i < n; ++i) {
        cxd s = a(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * std::conj(l_(j, k));
        l_(i, j) = s / l_(j, j).real();
      }
    }
  }

  void solve_inplace(std::vector<cxd>& b) const {
    const std::size_t n = l_.rows();
    for (std::size_t i = 0; i < n; ++i) {
      cxd s = b[i];
      for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * b[k];
      b[i] = s / l_(i, i).real();
    }
    for (std::size_t i = n; i-- > 0;) {
      cxd s = b[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= std::conj(l_(k, i)) * b[k];
      b[i] = s / l_(i, i).real();
    }
  }

 private:
  CMatrix l_;
};

}  // namespace wfem
