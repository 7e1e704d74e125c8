#pragma once

// Krylov solvers and the circulant preconditioning machinery.
//
// The corrected circulant S_n = C_n(f) + (1/(nr)) 1 1^T diagonalizes
// blockwise under the length-n DFT across block indices: frequency k sees
// the r x r Hermitian block f(-2 pi k / n), and the rank-one correction
// lands entirely in the zero-frequency block as (1/r) 1 1^T, which plugs
// the kernel of f(0). Applying S_n^{-1} is therefore r strided DFTs,
// n small Hermitian solves, and r inverse DFTs. The diagonal-times-
// circulant variant P_n(b) = D sqrt(b) S_n D sqrt(b) wraps the same core.
//
// Extremal eigenvalues of the banded stiffness matrices are certified by
// bisection with band-Cholesky positive definiteness probes, bracketed by
// Lanczos Ritz values (full reorthogonalization) and a Gershgorin bound.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "wfem/banded.hpp"
#include "wfem/dense.hpp"
#include "wfem/errors.hpp"
#include "wfem/fft.hpp"
#include "wfem/mesh.hpp"
#include "wfem/symbol.hpp"

namespace wfem {

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> history;  // stopping quantity after each iteration
  double time_ms = 0.0;
  bool converged = false;

  std::string to_text() const {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << "{\"iterations\": " << iterations
       << ", \"residual\": " << relative_residual << ", \"time_ms\": " << std::fixed
       << time_ms << "}";
    return os.str();
  }
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// Conjugate gradients with zero initial guess; stops on the relative
// unpreconditioned residual.
template <class Op>
std::pair<std::vector<double>, SolveReport> cg(const Op& a,
                                               const std::vector<double>& b,
                                               double tol = 1e-8,
                                               int maxit = 10000) {
  detail::Stopwatch clock;
  const std::size_t n = b.size();
  std::vector<double> x(n, 0.0), r = b, p = b, q(n);
  SolveReport rep;
  const double r0 = detail::norm2(r);
  if (r0 == 0.0) {
    rep.converged = true;
    rep.time_ms = clock.ms();
    return {x, rep};
  }
  double rr = r0 * r0;
  for (int it = 1; it <= maxit; ++it) {
    a.apply(p, q);
    const double alpha = rr / detail::dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    const double rr_new = detail::dot(r, r);
    const double rel = std::sqrt(rr_new) / r0;
    rep.iterations = it;
    rep.relative_residual = rel;
    rep.history.push_back(rel);
    if (rel <= tol) {
      rep.converged = true;
      break;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  rep.time_ms = clock.ms();
  return {x, rep};
}

// Block circulant preconditioner: factored frequency blocks plus an optional
// diagonal scaling (sqrt of the coefficient at element midpoints).
class CirculantPreconditioner {
 public:
  CirculantPreconditioner(const SpectralSymbol& sym, std::size_t n,
                          std::vector<double> diag_scale = {})
      : r_(sym.r), n_(n), diag_(std::move(diag_scale)) {
    raw_.reserve(n_);
    factors_.reserve(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      // Forward DFT convention: frequency k carries f(-2 pi k / n).
      CMatrix block = symbol_at(sym, -2.0 * kPi * static_cast<double>(k) /
                                         static_cast<double>(n_));
      if (k == 0) {
        const double c = 1.0 / static_cast<double>(r_);
        for (std::size_t i = 0; i < r_; ++i)
          for (std::size_t j = 0; j < r_; ++j) block(i, j) += c;
      }
      raw_.push_back(block);
      factors_.emplace_back(block);
    }
  }

  std::size_t order() const { return n_ * r_; }
  std::size_t block_degree() const { return r_; }
  std::size_t blocks() const { return n_; }

  void apply_inverse(const std::vector<double>& v, std::vector<double>& out) const {
    transform(v, out, true);
  }
  std::vector<double> apply_inverse(const std::vector<double>& v) const {
    std::vector<double> out(v.size());
    apply_inverse(v, out);
    return out;
  }

  // Forward multiplication by the preconditioner matrix itself.
  void apply(const std::vector<double>& v, std::vector<double>& out) const {
    transform(v, out, false);
  }
  std::vector<double> apply(const std::vector<double>& v) const {
    std::vector<double> out(v.size());
    apply(v, out);
    return out;
  }

 private:
  void transform(const std::vector<double>& v, std::vector<double>& out,
                 bool inverse) const {
    std::vector<std::vector<cxd>> comp(r_, std::vector<cxd>(n_));
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t c = 0; c < r_; ++c) {
        double x = v[j * r_ + c];
        if (!diag_.empty()) x = inverse ? x / diag_[j * r_ + c] : x * diag_[j * r_ + c];
        comp[c][j] = cxd(x, 0.0);
      }
    for (auto& ch : comp) fft(ch);
    std::vector<cxd> blk(r_);
    for (std::size_t k = 0; k < n_; ++k) {
      for (std::size_t c = 0; c < r_; ++c) blk[c] = comp[c][k];
      if (inverse) {
        factors_[k].solve_inplace(blk);
      } else {
        std::vector<cxd> y(r_, cxd(0.0, 0.0));
        for (std::size_t i = 0; i < r_; ++i)
          for (std::size_t j = 0; j < r_; ++j) y[i] += raw_[k](i, j) * blk[j];
        blk = y;
      }
      for (std::size_t c = 0; c < r_; ++c) comp[c][k] = blk[c];
    }
    for (auto& ch : comp) ifft(ch);
    out.resize(v.size());
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t c = 0; c < r_; ++c) {
        double x = comp[c][j].real();
        if (!diag_.empty()) x = inverse ? x / diag_[j * r_ + c] : x * diag_[j * r_ + c];
        out[j * r_ + c] = x;
      }
  }

  std::size_t r_, n_;
  std::vector<double> diag_;
  std::vector<CMatrix> raw_;
  std::vector<HermitianCholesky> factors_;
};

inline CirculantPreconditioner build_strang(const SpectralSymbol& sym,
                                            std::size_t n) {
  return CirculantPreconditioner(sym, n);
}

// D sqrt(b) S_n D sqrt(b) with b sampled at the element midpoints of the
// uniform n-element mesh on [0,1].
inline CirculantPreconditioner build_diag_circulant(const SpectralSymbol& sym,
                                                    std::size_t n,
                                                    const Coefficient& b) {
  std::vector<double> diag(n * sym.r);
  for (std::size_t j = 0; j < n; ++j) {
    const double mid = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    const double bj = b(mid);
    if (!(bj > 0.0))
      throw NonPositiveCoefficient("build_diag_circulant: b(midpoint) <= 0");
    const double s = std::sqrt(bj);
    for (std::size_t c = 0; c < sym.r; ++c) diag[j * sym.r + c] = s;
  }
  return CirculantPreconditioner(sym, n, std::move(diag));
}

// Preconditioned conjugate gradients, zero initial guess; stops on the
// relative preconditioned residual sqrt(r.z)/sqrt(r0.z0).
template <class Op, class Prec>
std::pair<std::vector<double>, SolveReport> pcg(const Op& a,
                                                const std::vector<double>& b,
                                                const Prec& prec,
                                                double tol = 1e-8,
                                                int maxit = 10000) {
  detail::Stopwatch clock;
  const std::size_t n = b.size();
  std::vector<double> x(n, 0.0), r = b, z(n), p(n), q(n);
  SolveReport rep;
  prec.apply_inverse(r, z);
  double rz = detail::dot(r, z);
  const double denom0 = std::sqrt(std::abs(rz));
  if (denom0 == 0.0) {
    rep.converged = true;
    rep.time_ms = clock.ms();
    return {x, rep};
  }
  p = z;
  for (int it = 1; it <= maxit; ++it) {
    a.apply(p, q);
    const double alpha = rz / detail::dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    prec.apply_inverse(r, z);
    const double rz_new = detail::dot(r, z);
    const double rel = std::sqrt(std::abs(rz_new)) / denom0;
    rep.iterations = it;
    rep.relative_residual = rel;
    rep.history.push_back(rel);
    if (rel <= tol) {
      rep.converged = true;
      break;
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  rep.time_ms = clock.ms();
  return {x, rep};
}

struct ExtremalEigs {
  double min = 0.0;
  double max = 0.0;
  bool converged = true;
};

namespace detail {

// Extreme Ritz values from a short Lanczos run with full
// reorthogonalization; deterministic start vector.
inline std::pair<double, double> lanczos_ritz_bracket(
    const SymmetricBandMatrix& a, std::size_t steps) {
  const std::size_t n = a.order();
  steps = std::min(steps, n);
  std::mt19937_64 gen(0x5DEECE66Dull);
  std::vector<std::vector<double>> basis;
  std::vector<double> v(n), w(n), alphas, betas;
  for (auto& vi : v) vi = canonical_uniform(gen) - 0.5;
  double nv = norm2(v);
  for (auto& vi : v) vi /= nv;
  basis.push_back(v);
  for (std::size_t j = 0; j < steps; ++j) {
    a.apply(basis[j], w);
    if (j > 0)
      for (std::size_t i = 0; i < n; ++i) w[i] -= betas[j - 1] * basis[j - 1][i];
    const double alpha = dot(w, basis[j]);
    alphas.push_back(alpha);
    for (std::size_t i = 0; i < n; ++i) w[i] -= alpha * basis[j][i];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const double c = dot(w, q);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
      }
    const double beta = norm2(w);
    if (j + 1 == steps || beta < 1e-13) break;
    betas.push_back(beta);
    for (std::size_t i = 0; i < n; ++i) w[i] /= beta;
    basis.push_back(w);
  }
  const std::size_t k = alphas.size();
  Matrix t(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    t(i, i) = alphas[i];
    if (i + 1 < k && i < betas.size()) {
      t(i, i + 1) = betas[i];
      t(i + 1, i) = betas[i];
    }
  }
  const std::vector<double> ritz = jacobi_eigenvalues(std::move(t));
  return {ritz.front(), ritz.back()};
}

}  // namespace detail

// Certified extremal eigenvalues of a symmetric positive definite banded
// matrix. Lanczos Ritz values bracket each extreme from the inside, the
// Gershgorin row bound and zero from the outside; bisection with band
// Cholesky definiteness probes then narrows each bracket to relative width
// tol (a probe at shift s succeeds exactly when s is on the definite side
// of the extreme eigenvalue).
inline ExtremalEigs extremal_eigs(const SymmetricBandMatrix& a,
                                  double tol = 1e-8) {
  const std::size_t n = a.order();
  ExtremalEigs out;
  if (n == 0) return out;
  if (n == 1) {
    out.min = out.max = a.band(0, 0);
    return out;
  }
  double gersh_lo = 0.0, gersh_hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    const std::size_t jmin = i > a.half_bandwidth() ? i - a.half_bandwidth() : 0;
    const std::size_t jmax = std::min(i + a.half_bandwidth(), n - 1);
    for (std::size_t j = jmin; j <= jmax; ++j)
      if (j != i) off += std::abs(a.at(i, j));
    gersh_lo = std::min(gersh_lo, a.band(0, i) - off);
    gersh_hi = std::max(gersh_hi, a.band(0, i) + off);
  }
  const auto [ritz_lo, ritz_hi] = detail::lanczos_ritz_bracket(a, 80);

  const auto bisect = [&](double lo, double hi, bool upper_end) {
    // upper_end: seeking lambda_max, probe sigma I - A; otherwise A - sigma I.
    for (int it = 0; it < 200; ++it) {
      const double width = hi - lo;
      if (width <= tol * std::max({std::abs(lo), std::abs(hi), 1e-300})) break;
      const double mid = 0.5 * (lo + hi);
      const bool definite = upper_end ? is_positive_definite(a.negated_shifted(mid))
                                      : is_positive_definite(a.shifted(-mid));
      if (upper_end) {
        (definite ? hi : lo) = mid;
      } else {
        (definite ? lo : hi) = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  out.max = ritz_hi >= gersh_hi ? ritz_hi : bisect(ritz_hi, gersh_hi, true);
  const double floor_lo = std::min(gersh_lo, ritz_lo);
  out.min = ritz_lo <= floor_lo ? ritz_lo : bisect(floor_lo, ritz_lo, false);
  out.converged = std::isfinite(out.min) && std::isfinite(out.max);
  return out;
}

// Eigenvalues of P^{-1} A for a symmetric positive definite preconditioner
// P given by its forward action: with P = L L^T these are the eigenvalues
// of L^{-1} A L^{-T}. Dense path, meant for moderate orders.
template <class Prec>
std::vector<double> preconditioned_spectrum(const SymmetricBandMatrix& a,
                                            const Prec& prec) {
  const std::size_t n = a.order();
  Matrix pdense(n, n);
  std::vector<double> e(n, 0.0), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    col.assign(n, 0.0);
    prec.apply(e, col);
    for (std::size_t i = 0; i < n; ++i) pdense(i, j) = col[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (pdense(i, j) + pdense(j, i));
      pdense(i, j) = s;
      pdense(j, i) = s;
    }
  const auto chol = dense_cholesky(pdense);
  if (!chol)
    throw SingularFrequencyBlock(
        "preconditioned_spectrum: preconditioner not positive definite");

  // Y = L^{-1} A, then C = (L^{-1} Y^T)^T = L^{-1} A L^{-T}.
  Matrix y(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = a.at(i, j);
    chol->forward_inplace(col);
    for (std::size_t i = 0; i < n; ++i) y(i, j) = col[i];
  }
  Matrix c(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = y(j, i);
    chol->forward_inplace(col);
    for (std::size_t i = 0; i < n; ++i) c(i, j) = col[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = s;
      c(j, i) = s;
    }
  return jacobi_eigenvalues(std::move(c));
}

template <class Prec>
int preconditioned_spectrum_cluster(const SymmetricBandMatrix& a,
                                    const Prec& prec, double eps) {
  int outliers = 0;
  for (double lam : preconditioned_spectrum(a, prec))
    if (lam <= 1.0 - eps || lam >= 1.0 + eps) ++outliers;
  return outliers;
}

}  // namespace wfem
