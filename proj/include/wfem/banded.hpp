#pragma once

// Symmetric banded storage for the assembled stiffness matrices. Only the
// lower band is kept: band(d, i) = A(i+d, i) for 0 <= d <= kd. The band
// Cholesky factorization doubles as a positive-definiteness probe for the
// bisection-based extremal eigenvalue solver.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wfem/dense.hpp"

namespace wfem {

class SymmetricBandMatrix {
 public:
  SymmetricBandMatrix() = default;
  SymmetricBandMatrix(std::size_t n, std::size_t kd)
      : n_(n), kd_(kd), a_((kd + 1) * n, 0.0) {}

  std::size_t order() const { return n_; }
  std::size_t half_bandwidth() const { return kd_; }

  double& band(std::size_t d, std::size_t i) { return a_[d * n_ + i]; }
  double band(std::size_t d, std::size_t i) const { return a_[d * n_ + i]; }

  double at(std::size_t i, std::size_t j) const {
    const std::size_t lo = i < j ? i : j;
    const std::size_t hi = i < j ? j : i;
    const std::size_t d = hi - lo;
    return d <= kd_ ? band(d, lo) : 0.0;
  }

  void add(std::size_t i, std::size_t j, double v) {
    if (j > i) std::swap(i, j);
    band(i - j, j) += v;
  }

  void apply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < n_; ++i) y[i] = band(0, i) * x[i];
    for (std::size_t d = 1; d <= kd_; ++d)
      for (std::size_t i = 0; i + d < n_; ++i) {
        const double v = band(d, i);
        y[i + d] += v * x[i];
        y[i] += v * x[i + d];
      }
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(n_);
    apply(std::span<const double>(x), std::span<double>(y));
    return y;
  }

  SymmetricBandMatrix scaled(double s) const {
    SymmetricBandMatrix m = *this;
    for (double& v : m.a_) v *= s;
    return m;
  }

  // A + shift*I, for definiteness probes.
  SymmetricBandMatrix shifted(double shift) const {
    SymmetricBandMatrix m = *this;
    for (std::size_t i = 0; i < n_; ++i) m.band(0, i) += shift;
    return m;
  }

  // shift*I - A.
  SymmetricBandMatrix negated_shifted(double shift) const {
    SymmetricBandMatrix m(n_, kd_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = -a_[k];
    for (std::size_t i = 0; i < n_; ++i) m.band(0, i) += shift;
    return m;
  }

  Matrix dense() const {
    Matrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = at(i, j);
    return m;
  }

  std::size_t nonzero_count() const {
    std::size_t nnz = 0;
    for (std::size_t d = 0; d <= kd_; ++d)
      for (std::size_t i = 0; i + d < n_; ++i)
        if (band(d, i) != 0.0) nnz += (d == 0) ? 1 : 2;
    return nnz;
  }

 private:
  std::size_t n_ = 0, kd_ = 0;
  std::vector<double> a_;
};

class BandCholesky {
 public:
  explicit BandCholesky(const SymmetricBandMatrix& a)
      : n_(a.order()), kd_(a.half_bandwidth()), l_(a) {
    for (std::size_t j = 0; j < n_; ++j) {
      double d = l_.band(0, j);
      const std::size_t kmin = j > kd_ ? j - kd_ : 0;
      for (std::size_t k = kmin; k < j; ++k) {
        const double ljk = l_.band(j - k, k);
        d -= ljk * ljk;
      }
      if (!(d > 0.0) || !std::isfinite(d)) {
        ok_ = false;
        return;
      }
      const double ljj = std::sqrt(d);
      l_.band(0, j) = ljj;
      const std::size_t imax = std::min(j + kd_, n_ - 1);
      for (std::size_t i = j + 1; i <= imax; ++i) {
        double s = l_.band(i - j, j);
        const std::size_t k0 = i > kd_ ? std::max(i - kd_, kmin) : kmin;
        for (std::size_t k = k0; k < j; ++k)
          s -= l_.band(i - k, k) * l_.band(j - k, k);
        l_.band(i - j, j) = s / ljj;
      }
    }
  }

  // True when the input matrix was numerically positive definite.
  bool ok() const { return ok_; }

  void solve_inplace(std::span<double> b) const {
    for (std::size_t j = 0; j < n_; ++j) {
      b[j] /= l_.band(0, j);
      const std::size_t imax = std::min(j + kd_, n_ - 1);
      for (std::size_t i = j + 1; i <= imax; ++i) b[i] -= l_.band(i - j, j) * b[j];
    }
    for (std::size_t j = n_; j-- > 0;) {
      const std::size_t imax = std::min(j + kd_, n_ - 1);
      for (std::size_t i = j + 1; i <= imax; ++i) b[j] -= l_.band(i - j, j) * b[i];
      b[j] /= l_.band(0, j);
    }
  }

  std::vector<double> solve(std::vector<double> b) const {
    solve_inplace(std::span<double>(b));
    return b;
  }

 private:
  std::size_t n_, kd_;
  SymmetricBandMatrix l_;
  bool ok_ = true;
};

inline bool is_positive_definite(const SymmetricBandMatrix& a) {
  return BandCholesky(a).ok();
}

}  // namespace wfem
