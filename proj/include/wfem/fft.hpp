#pragma once

// Mixed-radix complex DFT, recursive Cooley-Tukey over the smallest prime
// factor with a naive O(n^2) transform for prime lengths. Deterministic and
// dependency-free; every length that appears in practice (n = 10 * 2^k,
// powers of two, small primes) is handled without padding.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace wfem {

namespace detail {

inline std::size_t smallest_factor(std::size_t n) {
  if (n % 2 == 0) return 2;
  for (std::size_t p = 3; p * p <= n; p += 2)
    if (n % p == 0) return p;
  return n;
}

inline void naive_dft(std::vector<std::complex<double>>& a, double sign) {
  const std::size_t n = a.size();
  const double step = sign * 2.0 * 3.14159265358979323846 / static_cast<double>(n);
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      s += a[j] * std::polar(1.0, step * static_cast<double>(j * k % n));
    out[k] = s;
  }
  a.swap(out);
}

inline void transform(std::vector<std::complex<double>>& a, double sign) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  const std::size_t p = smallest_factor(n);
  if (p == n) {
    naive_dft(a, sign);
    return;
  }
  const std::size_t m = n / p;
  std::vector<std::vector<std::complex<double>>> sub(
      p, std::vector<std::complex<double>>(m));
  for (std::size_t j = 0; j < n; ++j) sub[j % p][j / p] = a[j];
  for (auto& s : sub) transform(s, sign);
  const double step = sign * 2.0 * 3.14159265358979323846 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t s = 0; s < p; ++s)
      acc += std::polar(1.0, step * static_cast<double>(s * k % n)) * sub[s][k % m];
    a[k] = acc;
  }
}

}  // namespace detail

// Forward transform, kernel e^{-2 pi i j k / n}.
inline void fft(std::vector<std::complex<double>>& a) {
  detail::transform(a, -1.0);
}

// Inverse transform including the 1/n normalization.
inline void ifft(std::vector<std::complex<double>>& a) {
  detail::transform(a, 1.0);
  const double inv = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= inv;
}

}  // namespace wfem
