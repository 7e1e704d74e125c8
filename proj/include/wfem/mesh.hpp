#pragma once

// One-dimensional meshes on [0,1]: uniform, graded through a monotone
// mapping g, and randomized perturbations of the uniform mesh. A graded
// mesh for coefficient b is spectrally equivalent to a uniform mesh for the
// transplanted coefficient b(g(x))/g'(x); the helper below performs that
// substitution.

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wfem/errors.hpp"

namespace wfem {

struct Mesh1D {
  std::vector<double> endpoints;  // strictly increasing, size n+1

  std::size_t elements() const { return endpoints.size() - 1; }
  double element_start(std::size_t k) const { return endpoints[k]; }
  double element_length(std::size_t k) const {
    return endpoints[k + 1] - endpoints[k];
  }
  double length() const { return endpoints.back() - endpoints.front(); }
};

struct Coefficient {
  std::function<double(double)> fn;
  std::string label = "b";

  double operator()(double x) const { return fn(x); }
};

inline Coefficient unit_coefficient() {
  return Coefficient{[](double) { return 1.0; }, "one"};
}

struct MeshMapping {
  std::function<double(double)> g;   // [0,1] -> [0,1], increasing
  std::function<double(double)> dg;  // g'
  std::string label = "g";
};

inline Mesh1D uniform_mesh(std::size_t n) {
  if (n < 1) throw std::invalid_argument("uniform_mesh: need n >= 1");
  Mesh1D m;
  m.endpoints.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    m.endpoints[j] = static_cast<double>(j) / static_cast<double>(n);
  return m;
}

inline Mesh1D graded_mesh(std::size_t n, const MeshMapping& map) {
  if (n < 1) throw std::invalid_argument("graded_mesh: need n >= 1");
  if (std::abs(map.g(0.0)) > 1e-12 || std::abs(map.g(1.0) - 1.0) > 1e-12)
    throw NonMonotoneMapping("graded_mesh: mapping must send 0 to 0 and 1 to 1");
  Mesh1D m;
  m.endpoints.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    m.endpoints[j] = map.g(static_cast<double>(j) / static_cast<double>(n));
  m.endpoints.front() = 0.0;
  m.endpoints.back() = 1.0;
  for (std::size_t j = 0; j < n; ++j)
    if (!(m.endpoints[j + 1] > m.endpoints[j]))
      throw NonMonotoneMapping("graded_mesh: mapping is not strictly increasing");
  return m;
}

// Uniform in [0,1) from the generator's raw 64-bit output; bit-exact across
// platforms, unlike std::uniform_real_distribution.
inline double canonical_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Interior endpoint j moves to j/n + theta*c_j with c_j uniform in
// (-1/(2n), 1/(2n)); theta < 1 keeps the mesh strictly increasing.
inline Mesh1D randomized_mesh(std::size_t n, double theta, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("randomized_mesh: need n >= 1");
  if (!(theta >= 0.0) || theta >= 1.0)
    throw std::invalid_argument("randomized_mesh: need 0 <= theta < 1");
  Mesh1D m;
  m.endpoints.resize(n + 1);
  m.endpoints.front() = 0.0;
  m.endpoints.back() = 1.0;
  std::mt19937_64 gen(seed);
  const double dn = static_cast<double>(n);
  for (std::size_t j = 1; j < n; ++j) {
    const double c = (canonical_uniform(gen) - 0.5) / dn;
    m.endpoints[j] = static_cast<double>(j) / dn + theta * c;
  }
  return m;
}

// g(x) = (e^x - 1)/(e - 1), the exponential grading toward the left end.
inline MeshMapping exponential_mapping() {
  const double den = std::exp(1.0) - 1.0;
  return MeshMapping{[den](double x) { return (std::exp(x) - 1.0) / den; },
                     [den](double x) { return std::exp(x) / den; },
                     "exp"};
}

// Transplants a graded-mesh problem to the uniform mesh: the coefficient
// seen there is b(g(x))/g'(x).
inline Coefficient graded_to_equivalent_coefficient(const MeshMapping& map,
                                                    const Coefficient& b) {
  auto g = map.g;
  auto dg = map.dg;
  auto bf = b.fn;
  return Coefficient{[g, dg, bf](double x) { return bf(g(x)) / dg(x); },
                     b.label + "(" + map.label + ")/" + map.label + "'"};
}

inline void write_mesh_csv(const Mesh1D& mesh, std::ostream& os) {
  os.precision(17);
  os << "endpoint\n";
  for (double y : mesh.endpoints) os << y << "\n";
}

}  // namespace wfem
