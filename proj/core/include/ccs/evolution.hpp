// Semi-implicit (IMEX) integrator for the evolution system
//   u_t = div(grad u - chi u grad log v),   v_t = Laplace v - u v
// with no-flux u and Dirichlet v boundary conditions. Diffusion is implicit;
// the chemotactic flux and the consumption term are explicit. The u update is
// written in discrete flux form over faces with no boundary faces at all, so
// the quadrature mass of u is conserved to rounding. The chemotactic face
// density uses the logarithmic mean of the adjacent u values, which makes
// u = alpha v^chi an exact discrete equilibrium of the u equation.
#pragma once

#include <vector>

#include "ccs/linear_operator.hpp"

namespace ccs {

// v reached a nonpositive node; retry with a smaller time step.
struct StepRejectedError : Error {
    using Error::Error;
};

struct EvolutionState {
    double time = 0.0;
    Field u;
    Field v;
    double initial_mass = 0.0; // quadrature mass of u at construction
    double mass_drift = 0.0;   // |mass(t) - initial_mass|
    long steps = 0;

    static EvolutionState start(Field u0, Field v0);
};

// One IMEX step. Pure: returns the advanced state.
EvolutionState step(const EvolutionState& state, double dt, double chi,
                    const BoundaryValues& vstar, double linear_tol = 1e-13);

struct EvolutionParams {
    double dt = 0.0;        // <= 0: use 0.25 h^2 (explicit-term adequacy guard)
    double stall_tol = 0.0; // > 0: stop when max|du|/dt falls below this
    double linear_tol = 1e-13;
    int record_stride = 1;  // time-series sampling stride in steps
};

struct EvolutionTrace {
    std::vector<double> t;
    std::vector<double> dist_u; // max-norm distance to the reference (0 if none)
    std::vector<double> dist_v;
    std::vector<double> mass_u;
    EvolutionState final_state;
    bool stalled = false;
};

// Steps until t >= T or the update rate stalls. References, when given, feed
// the recorded distance columns. Halves dt on step rejection; a rejection
// cascade below dt = 1e-14 * (initial dt) aborts with NonConvergenceError.
EvolutionTrace evolve_to_steady(const EvolutionState& initial, double chi,
                                const BoundaryValues& vstar, double T,
                                const EvolutionParams& params,
                                const Field* u_reference = nullptr,
                                const Field* v_reference = nullptr);

} // namespace ccs
