#pragma once

#include <stdexcept>
#include <string>

namespace wfem {

// Invalid reference-element node configurations.
struct DegenerateNodes : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BoundaryViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerically singular generalized Vandermonde matrix.
struct SingularVandermonde : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graded mesh mapping fails strict monotonicity.
struct NonMonotoneMapping : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Jacobi sweep limit exceeded.
struct EigensolverNoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A corrected circulant frequency block is not positive definite.
struct SingularFrequencyBlock : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Diffusion coefficient sampled non-positive.
struct NonPositiveCoefficient : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace wfem
