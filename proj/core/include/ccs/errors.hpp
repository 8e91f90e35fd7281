// Error taxonomy shared by all modules. The CLI maps these onto exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace ccs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid geometry, parameters, or operator data (nonpositive lengths,
// negative reaction coefficients, r0 >= R, ...).
struct InvalidSpecError : Error {
    using Error::Error;
};

// Malformed or inconsistent run configuration.
struct ConfigError : Error {
    using Error::Error;
};

// An iteration (linear or nonlinear) hit its cap without meeting its
// tolerance. Carries the final residual for diagnostics.
struct NonConvergenceError : Error {
    NonConvergenceError(const std::string& what, int iterations, double residual)
        : Error(what), iterations(iterations), residual(residual) {}
    int iterations = 0;
    double residual = 0.0;
};

// A quantity the discrete maximum principle (or another structural
// argument) guarantees came out wrong. Signals a bug, not bad input.
struct InvariantViolationError : Error {
    using Error::Error;
};

// Bracket expansion for the mass inversion exceeded alpha_cap. Reports the
// best values reached so the caller can see how far the mass map got.
struct MassUnreachableError : Error {
    MassUnreachableError(const std::string& what, double alpha_reached,
                         double best_mass, double best_lower_mass)
        : Error(what),
          alpha_reached(alpha_reached),
          best_mass(best_mass),
          best_lower_mass(best_lower_mass) {}
    double alpha_reached = 0.0;
    double best_mass = 0.0;
    double best_lower_mass = 0.0;
};

} // namespace ccs
