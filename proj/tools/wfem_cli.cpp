// Command line front end for the experiment drivers.
//
// Exit codes: 0 success, 1 output I/O failure, 2 configuration error,
// 3 solver or eigensolver non-convergence.

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wfem/errors.hpp"
#include "wfem/experiments.hpp"

namespace {

int dispatch(const std::string& name, wfem::ExperimentConfig cfg,
             bool lagrangian, const std::string& out_path) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "wfem: cannot open '" << out_path << "' for writing\n";
      return 1;
    }
    os = &file;
  }

  bool converged = true;
  if (name == "eigencurves") {
    // Symbol of one concrete element: default to the weights family unless
    // equispaced nodes were requested explicitly.
    if (cfg.xi.empty() && !lagrangian) cfg.xi = wfem::default_weights(cfg.degree);
    wfem::run_eigencurves(cfg, *os);
  } else if (name == "xi-sweep") {
    wfem::run_xi_sweep(cfg, *os);
  } else if (name == "convergence") {
    wfem::run_convergence(cfg, *os);
  } else if (name == "cond-table") {
    converged = wfem::run_cond_table(cfg, *os).converged;
  } else if (name == "nonconstant") {
    converged = wfem::run_nonconstant(cfg, *os).converged;
  } else {
    converged = wfem::run_robustness(cfg, *os).converged;
  }

  os->flush();
  if (!*os) {
    std::cerr << "wfem: write failure on '" << out_path << "'\n";
    return 1;
  }
  if (!converged) {
    std::cerr << "wfem: iteration limit reached before the tolerance\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Lagrangian finite elements: spectral symbols, "
               "conditioning tables, and circulant-preconditioned solves"};
  app.require_subcommand(1);

  wfem::ExperimentConfig cfg;
  std::vector<double> xi;
  bool lagrangian = false;
  std::string out;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--degree,-r", cfg.degree, "polynomial degree")
        ->check(CLI::Range(std::size_t{1}, std::size_t{8}));
    sub->add_option("--xi", xi,
                    "left interior node positions of the symmetric family");
    sub->add_flag("--lagrangian", lagrangian, "use equispaced nodes");
    sub->add_option("--elements,-n", cfg.elements, "number of mesh elements")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    sub->add_option("--coeff", cfg.coeff, "diffusion coefficient")
        ->check(CLI::IsMember({"one", "one-plus-x2"}));
    sub->add_option("--mesh", cfg.mesh, "mesh family")
        ->check(CLI::IsMember({"uniform", "graded-exp", "random"}));
    sub->add_option("--theta", cfg.theta, "random mesh perturbation amplitude")
        ->check(CLI::Range(0.0, 0.99));
    sub->add_option("--seed", cfg.seed, "random mesh seed");
    sub->add_option("--tol", cfg.tol, "solver relative tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "symbol sampling grid size")
        ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 20));
    sub->add_option("--out,-o", out, "output CSV path (default stdout)");
    return sub;
  };

  add_common(app.add_subcommand(
      "eigencurves", "sample the eigenvalue curves of the block symbol"));
  add_common(app.add_subcommand(
      "xi-sweep", "conditioning across the symmetric weight range"));
  add_common(app.add_subcommand(
      "convergence", "H1 error rates against a manufactured solution"));
  add_common(app.add_subcommand(
      "cond-table", "extreme eigenvalues, estimates, and solver iterations"));
  add_common(app.add_subcommand(
      "nonconstant", "preconditioned iterations for a varying coefficient"));
  add_common(app.add_subcommand(
      "robustness", "iteration counts on randomly perturbed meshes"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (lagrangian && !xi.empty()) {
    std::cerr << "wfem: --lagrangian and --xi are mutually exclusive\n";
    return 2;
  }
  cfg.xi = xi;

  try {
    return dispatch(app.get_subcommands().front()->get_name(), cfg, lagrangian,
                    out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "wfem: " << e.what() << "\n";
    return 2;
  } catch (const wfem::SingularVandermonde& e) {
    std::cerr << "wfem: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "wfem: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "wfem: " << e.what() << "\n";
    return 3;
  }
}
