// Assembly of the full stationary pair (u, v): v solves the scalar problem at
// the alpha matching the prescribed cell mass, and u = alpha v^chi by the
// flux-free reduction. flux_residual certifies that shortcut numerically.
#pragma once

#include <utility>

#include "ccs/mass_map.hpp"

namespace ccs {

struct SteadyState {
    double alpha = 0.0;
    Field v;
    Field u;                     // alpha * v^chi nodewise
    double achieved_mass = 0.0;  // integral of u
    double flux_interior_norm = 0.0;
    double flux_boundary_norm = 0.0;
    double nonlinear_residual = 0.0;
    int nonlinear_iterations = 0;
    int mass_evaluations = 0; // 0 when alpha was prescribed directly
    SolveMethod method = SolveMethod::hybrid;
};

// Solve for a prescribed total mass m > 0 (inverts the mass map first).
SteadyState compute_steady_state(const Grid& grid, double chi, const BoundaryValues& vstar,
                                 double target_mass, const MassParams& mass_params,
                                 const SolverParams& solver_params);

// Solve for a prescribed alpha >= 0 directly.
SteadyState compute_steady_state_for_alpha(const Grid& grid, double chi,
                                           const BoundaryValues& vstar, double alpha,
                                           const SolverParams& solver_params);

// Residual of the no-flux structure for the flux F = grad u - chi u grad log v:
// first component is the max-norm of the discrete (conservative, face-based)
// divergence of F over interior nodes, second the max-norm of the nodal F . nu
// over boundary nodes (rectangle corners excluded: no normal there). Both
// vanish at second order under refinement when u = alpha v^chi. v must be
// positive.
std::pair<double, double> flux_residual(const Field& u, const Field& v, double chi);

} // namespace ccs
