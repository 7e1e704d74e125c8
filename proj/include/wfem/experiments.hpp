#pragma once

// Experiment drivers behind the command line tool. Each driver builds the
// configured discretization, runs the computation, returns the numbers in a
// plain struct, and emits a CSV with the configuration echoed in '#' lines.

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wfem/assembly.hpp"
#include "wfem/krylov.hpp"
#include "wfem/mesh.hpp"
#include "wfem/reference.hpp"
#include "wfem/symbol.hpp"

namespace wfem {

struct ExperimentConfig {
  std::size_t degree = 3;
  std::vector<double> xi;        // left node weights; empty = equispaced
  std::size_t elements = 64;
  std::string coeff = "one";     // one | one-plus-x2
  std::string mesh = "uniform";  // uniform | graded-exp | random
  double theta = 0.0;            // randomized-mesh amplitude (0 = full sweep)
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::size_t grid = 2049;
};

inline std::vector<double> default_weights(std::size_t degree) {
  switch (degree) {
    case 3:
      return {0.29};
    case 4:
      return {0.21};
    case 5:
      return {0.10, 0.30};
    default:
      throw std::invalid_argument("default_weights: no default for degree " +
                                  std::to_string(degree));
  }
}

inline ReferenceElement config_element(const ExperimentConfig& cfg) {
  if (cfg.xi.empty()) return equispaced_element(cfg.degree);
  return ReferenceElement(symmetric_points(cfg.degree, cfg.xi));
}

inline ReferenceElement config_weights_element(const ExperimentConfig& cfg) {
  return ReferenceElement(symmetric_points(
      cfg.degree, cfg.xi.empty() ? default_weights(cfg.degree) : cfg.xi));
}

struct Manufactured {
  Coefficient b;
  std::function<double(double)> u, du, f;
};

// Problems with known solutions for -(b u')' = f, u(0) = u(1) = 0.
inline Manufactured manufactured_problem(const std::string& coeff) {
  if (coeff == "one") {
    return Manufactured{
        unit_coefficient(),
        [](double x) { return std::sin(kPi * x); },
        [](double x) { return kPi * std::cos(kPi * x); },
        [](double x) { return kPi * kPi * std::sin(kPi * x); }};
  }
  if (coeff == "one-plus-x2") {
    return Manufactured{
        Coefficient{[](double x) { return 1.0 + x * x; }, "one-plus-x2"},
        [](double x) { return x * (1.0 - x) * std::exp(x); },
        [](double x) { return std::exp(x) * (1.0 - x - x * x); },
        [](double x) {
          return std::exp(x) * x * (1.0 + x * (3.0 + x * (5.0 + x)));
        }};
  }
  throw std::invalid_argument("manufactured_problem: unknown coefficient '" +
                              coeff + "'");
}

inline Mesh1D config_mesh(const ExperimentConfig& cfg, std::size_t n) {
  if (cfg.mesh == "uniform") return uniform_mesh(n);
  if (cfg.mesh == "graded-exp") return graded_mesh(n, exponential_mapping());
  if (cfg.mesh == "random") return randomized_mesh(n, cfg.theta, cfg.seed);
  throw std::invalid_argument("config_mesh: unknown mesh '" + cfg.mesh + "'");
}

inline void echo_config(const ExperimentConfig& cfg, std::ostream& os,
                        const std::string& experiment) {
  os << "# experiment," << experiment << "\n# degree," << cfg.degree
     << "\n# nodes,";
  if (cfg.xi.empty()) {
    os << "equispaced";
  } else {
    os << "symmetric";
    for (double x : cfg.xi) os << ":" << x;
  }
  os << "\n# elements," << cfg.elements << "\n# coeff," << cfg.coeff
     << "\n# mesh," << cfg.mesh << "\n# theta," << cfg.theta << "\n# seed,"
     << cfg.seed << "\n# tol," << cfg.tol << "\n";
}

namespace detail {

inline std::vector<std::size_t> doubling_ladder(std::size_t first,
                                                std::size_t count) {
  std::vector<std::size_t> ns(count);
  for (std::size_t i = 0; i < count; ++i) ns[i] = first << i;
  return ns;
}

}  // namespace detail

inline std::vector<std::size_t> table_sizes(std::size_t degree) {
  return detail::doubling_ladder(degree == 3 ? 10 : 2, 8);
}

inline std::vector<std::size_t> convergence_sizes(std::size_t degree) {
  return detail::doubling_ladder(degree == 3 ? 10 : 2, 5);
}

inline std::vector<std::size_t> robustness_sizes(std::size_t degree) {
  return detail::doubling_ladder(degree == 3 ? 10 : 2, 7);
}

// Assemble on the given mesh, scale to the symbol normalization, pad to
// order n*r, and run PCG against the (optionally diagonally scaled) Strang
// circulant of the element's symbol.
inline SolveReport preconditioned_solve(const Mesh1D& mesh,
                                        const ReferenceElement& elem,
                                        const Manufactured& man, double tol,
                                        bool diag_scaled, int maxit = 4000) {
  StiffnessSystem sys = assemble(mesh, elem, man.b);
  set_load(sys, man.f);
  const StiffnessSystem hat = extend_hat(symbol_normalized(sys));
  const SpectralSymbol sym = build_symbol(elem);
  const std::size_t n = mesh.elements();
  const CirculantPreconditioner prec =
      diag_scaled ? build_diag_circulant(sym, n, man.b) : build_strang(sym, n);
  return pcg(hat.matrix, hat.rhs, prec, tol, maxit).second;
}

// ---- eigencurves ----------------------------------------------------------

struct EigencurveResult {
  EigencurveSample sample;
  double curvature_half = 0.0;  // fitted lambda_1''(0)/2
  double estimate = 0.0;        // conditioning estimate at cfg.elements
};

inline EigencurveResult run_eigencurves(const ExperimentConfig& cfg,
                                        std::ostream& os) {
  const ReferenceElement elem = config_element(cfg);
  const SpectralSymbol sym = build_symbol(elem);
  EigencurveResult out;
  out.sample = eigencurves(sym, cfg.grid);
  out.curvature_half = lambda1_curvature_half(sym);
  out.estimate = conditioning_estimate(sym, cfg.elements, cfg.grid);
  echo_config(cfg, os, "eigencurves");
  os << "# curvature_half," << out.curvature_half << "\n# estimate,"
     << out.estimate << "\n";
  write_eigencurves_csv(out.sample, os);
  return out;
}

// ---- xi sweep -------------------------------------------------------------

struct XiSweepResult {
  std::vector<double> xis;
  std::vector<double> estimates;  // symbol-based conditioning estimate
  std::vector<double> kappas;     // assembled extremal ratio, same n
  double best_xi = 0.0;
  double best_estimate = 0.0;
};

inline XiSweepResult run_xi_sweep(const ExperimentConfig& cfg,
                                  std::ostream& os) {
  if (cfg.degree != 3 && cfg.degree != 4)
    throw std::invalid_argument("run_xi_sweep: single-weight sweep needs degree 3 or 4");
  XiSweepResult out;
  const Mesh1D mesh = uniform_mesh(cfg.elements);
  const Coefficient b = unit_coefficient();
  for (int i = 0; i <= 80; ++i) {
    const double xi = 0.05 + 0.005 * static_cast<double>(i);
    const ReferenceElement elem(symmetric_points(cfg.degree, {xi}));
    const SpectralSymbol sym = build_symbol(elem);
    const double est = conditioning_estimate(sym, cfg.elements, cfg.grid);
    const StiffnessSystem sys = symbol_normalized(assemble(mesh, elem, b));
    const ExtremalEigs ee = extremal_eigs(sys.matrix);
    out.xis.push_back(xi);
    out.estimates.push_back(est);
    out.kappas.push_back(ee.max / ee.min);
    if (out.best_estimate == 0.0 || est < out.best_estimate) {
      out.best_estimate = est;
      out.best_xi = xi;
    }
  }
  echo_config(cfg, os, "xi-sweep");
  os.precision(10);
  os << "xi,estimate,kappa\n";
  for (std::size_t i = 0; i < out.xis.size(); ++i)
    os << out.xis[i] << "," << out.estimates[i] << "," << out.kappas[i] << "\n";
  os << "# best_xi," << out.best_xi << "\n# best_estimate," << out.best_estimate
     << "\n";
  return out;
}

// ---- convergence ----------------------------------------------------------

struct ConvergenceResult {
  std::vector<std::size_t> ns;
  std::vector<double> errors_weights, errors_lagrangian;
  std::vector<double> rates_weights, rates_lagrangian;  // size ns.size()-1
};

inline ConvergenceResult run_convergence(const ExperimentConfig& cfg,
                                         std::ostream& os) {
  const Manufactured man = manufactured_problem(cfg.coeff);
  const ReferenceElement weights = config_weights_element(cfg);
  const ReferenceElement lagrangian = equispaced_element(cfg.degree);
  ConvergenceResult out;
  out.ns = convergence_sizes(cfg.degree);
  const auto h1_error = [&](const ReferenceElement& elem, std::size_t n) {
    StiffnessSystem sys = assemble(config_mesh(cfg, n), elem, man.b);
    set_load(sys, man.f);
    return h1_seminorm_error(sys, solve_direct(sys), man.du);
  };
  for (std::size_t n : out.ns) {
    out.errors_weights.push_back(h1_error(weights, n));
    out.errors_lagrangian.push_back(h1_error(lagrangian, n));
  }
  for (std::size_t i = 1; i < out.ns.size(); ++i) {
    out.rates_weights.push_back(
        std::log2(out.errors_weights[i - 1] / out.errors_weights[i]));
    out.rates_lagrangian.push_back(
        std::log2(out.errors_lagrangian[i - 1] / out.errors_lagrangian[i]));
  }
  echo_config(cfg, os, "convergence");
  os.precision(10);
  os << "n,error_weights,rate_weights,error_lagrangian,rate_lagrangian\n";
  for (std::size_t i = 0; i < out.ns.size(); ++i) {
    os << out.ns[i] << "," << out.errors_weights[i] << ",";
    if (i > 0) os << out.rates_weights[i - 1];
    os << "," << out.errors_lagrangian[i] << ",";
    if (i > 0) os << out.rates_lagrangian[i - 1];
    os << "\n";
  }
  return out;
}

// ---- conditioning table ---------------------------------------------------

struct CondTableResult {
  std::vector<std::size_t> ns;
  std::vector<double> kappa_weights, estimate_weights;
  std::vector<double> kappa_lagrangian, estimate_lagrangian;
  std::vector<int> iters_weights, iters_lagrangian;
  bool converged = true;
};

inline CondTableResult run_cond_table(const ExperimentConfig& cfg,
                                      std::ostream& os) {
  const Manufactured man = manufactured_problem(cfg.coeff);
  const ReferenceElement weights = config_weights_element(cfg);
  const ReferenceElement lagrangian = equispaced_element(cfg.degree);
  const SpectralSymbol sym_w = build_symbol(weights);
  const SpectralSymbol sym_l = build_symbol(lagrangian);
  const bool diag = cfg.coeff != "one";
  CondTableResult out;
  out.ns = table_sizes(cfg.degree);
  for (std::size_t n : out.ns) {
    const Mesh1D mesh = uniform_mesh(n);
    const auto row = [&](const ReferenceElement& elem, const SpectralSymbol& sym,
                         std::vector<double>& kappa, std::vector<double>& est,
                         std::vector<int>& iters) {
      const StiffnessSystem sys = symbol_normalized(assemble(mesh, elem, man.b));
      const ExtremalEigs ee = extremal_eigs(sys.matrix);
      kappa.push_back(ee.max / ee.min);
      est.push_back(conditioning_estimate(sym, n, cfg.grid));
      const SolveReport rep =
          preconditioned_solve(mesh, elem, man, cfg.tol, diag);
      iters.push_back(rep.iterations);
      out.converged = out.converged && rep.converged && ee.converged;
    };
    row(weights, sym_w, out.kappa_weights, out.estimate_weights,
        out.iters_weights);
    row(lagrangian, sym_l, out.kappa_lagrangian, out.estimate_lagrangian,
        out.iters_lagrangian);
  }
  echo_config(cfg, os, "cond-table");
  os.precision(6);
  os << "n,kappa_weights,estimate_weights,iters_weights,kappa_lagrangian,"
        "estimate_lagrangian,iters_lagrangian\n";
  for (std::size_t i = 0; i < out.ns.size(); ++i)
    os << out.ns[i] << "," << out.kappa_weights[i] << ","
       << out.estimate_weights[i] << "," << out.iters_weights[i] << ","
       << out.kappa_lagrangian[i] << "," << out.estimate_lagrangian[i] << ","
       << out.iters_lagrangian[i] << "\n";
  return out;
}

// ---- non-constant coefficient ---------------------------------------------

struct NonconstantResult {
  std::vector<std::size_t> ns;
  std::vector<int> iters_weights, iters_lagrangian;
  std::size_t comb_n = 16;
  std::vector<double> comb_weights, comb_lagrangian;  // P^{-1}A spectra
  bool converged = true;
};

inline NonconstantResult run_nonconstant(const ExperimentConfig& cfg,
                                         std::ostream& os) {
  const std::string coeff = cfg.coeff == "one" ? "one-plus-x2" : cfg.coeff;
  const Manufactured man = manufactured_problem(coeff);
  const ReferenceElement weights = config_weights_element(cfg);
  const ReferenceElement lagrangian = equispaced_element(cfg.degree);
  NonconstantResult out;
  out.ns = table_sizes(cfg.degree);
  for (std::size_t n : out.ns) {
    const Mesh1D mesh = uniform_mesh(n);
    const SolveReport rw = preconditioned_solve(mesh, weights, man, cfg.tol, true);
    const SolveReport rl =
        preconditioned_solve(mesh, lagrangian, man, cfg.tol, true);
    out.iters_weights.push_back(rw.iterations);
    out.iters_lagrangian.push_back(rl.iterations);
    out.converged = out.converged && rw.converged && rl.converged;
  }
  const auto comb = [&](const ReferenceElement& elem) {
    const Mesh1D mesh = uniform_mesh(out.comb_n);
    const StiffnessSystem hat =
        extend_hat(symbol_normalized(assemble(mesh, elem, man.b)));
    const CirculantPreconditioner prec =
        build_diag_circulant(build_symbol(elem), out.comb_n, man.b);
    return preconditioned_spectrum(hat.matrix, prec);
  };
  out.comb_weights = comb(weights);
  out.comb_lagrangian = comb(lagrangian);
  echo_config(cfg, os, "nonconstant");
  os << "# coeff_used," << coeff << "\n";
  os << "n,iters_weights,iters_lagrangian\n";
  for (std::size_t i = 0; i < out.ns.size(); ++i)
    os << out.ns[i] << "," << out.iters_weights[i] << ","
       << out.iters_lagrangian[i] << "\n";
  os.precision(10);
  os << "# preconditioned spectrum at n=" << out.comb_n << "\n";
  os << "index,lambda_weights,lambda_lagrangian\n";
  for (std::size_t i = 0; i < out.comb_weights.size(); ++i)
    os << i << "," << out.comb_weights[i] << "," << out.comb_lagrangian[i]
       << "\n";
  return out;
}

// ---- mesh robustness ------------------------------------------------------

struct RobustnessRow {
  double theta = 0.0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  int iters_weights = 0;
  int iters_lagrangian = 0;
};

struct RobustnessResult {
  std::vector<RobustnessRow> rows;
  bool converged = true;
};

inline RobustnessResult run_robustness(const ExperimentConfig& cfg,
                                       std::ostream& os) {
  const Manufactured man = manufactured_problem(cfg.coeff);
  const ReferenceElement weights = config_weights_element(cfg);
  const ReferenceElement lagrangian = equispaced_element(cfg.degree);
  const std::vector<double> thetas =
      cfg.theta > 0.0 ? std::vector<double>{cfg.theta}
                      : std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  RobustnessResult out;
  for (double theta : thetas)
    for (std::uint64_t seed = cfg.seed; seed < cfg.seed + 3; ++seed)
      for (std::size_t n : robustness_sizes(cfg.degree)) {
        const Mesh1D mesh = randomized_mesh(n, theta, seed);
        const bool diag = cfg.coeff != "one";
        const SolveReport rw =
            preconditioned_solve(mesh, weights, man, cfg.tol, diag);
        const SolveReport rl =
            preconditioned_solve(mesh, lagrangian, man, cfg.tol, diag);
        out.rows.push_back({theta, seed, n, rw.iterations, rl.iterations});
        out.converged = out.converged && rw.converged && rl.converged;
      }
  echo_config(cfg, os, "robustness");
  os << "theta,seed,n,iters_weights,iters_lagrangian\n";
  for (const RobustnessRow& r : out.rows)
    os << r.theta << "," << r.seed << "," << r.n << "," << r.iters_weights
       << "," << r.iters_lagrangian << "\n";
  return out;
}

}  // namespace wfem
