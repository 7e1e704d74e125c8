#pragma once

// Lagrange basis on an arbitrary node set. Values come from the second
// barycentric form (with an exact branch when the evaluation point hits a
// node); derivatives from the expanded product rule, which stays valid at
// the nodes themselves. Node counts here are small (degree <= 8 in
// practice), so O(m^2)-per-point derivative cost is irrelevant.

#include <cstddef>
#include <vector>

#include "wfem/errors.hpp"

namespace wfem {

class LagrangeBasis {
 public:
  explicit LagrangeBasis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    const std::size_t m = nodes_.size();
    w_.assign(m, 1.0);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        if (k == j) continue;
        const double d = nodes_[j] - nodes_[k];
        if (d == 0.0) throw DegenerateNodes("lagrange basis: repeated node");
        w_[j] /= d;
      }
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }

  // ell_j(x) for all j.
  std::vector<double> values_at(double x) const {
    const std::size_t m = nodes_.size();
    std::vector<double> v(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      if (x == nodes_[j]) {
        v[j] = 1.0;
        return v;
      }
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      v[j] = w_[j] / (x - nodes_[j]);
      denom += v[j];
    }
    for (std::size_t j = 0; j < m; ++j) v[j] /= denom;
    return v;
  }

  // ell_j'(x) = sum_{k != j} 1/(x_j - x_k) prod_{m != j,k} (x - x_m)/(x_j - x_m).
  std::vector<double> derivatives_at(double x) const {
    const std::size_t m = nodes_.size();
    std::vector<double> d(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (k == j) continue;
        double prod = 1.0 / (nodes_[j] - nodes_[k]);
        for (std::size_t l = 0; l < m; ++l) {
          if (l == j || l == k) continue;
          prod *= (x - nodes_[l]) / (nodes_[j] - nodes_[l]);
        }
        acc += prod;
      }
      d[j] = acc;
    }
    return d;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> w_;  // barycentric weights
};

inline std::vector<double> equispaced_nodes(std::size_t degree) {
  std::vector<double> x(degree + 1);
  for (std::size_t j = 0; j <= degree; ++j)
    x[j] = static_cast<double>(j) / static_cast<double>(degree);
  return x;
}

}  // namespace wfem
