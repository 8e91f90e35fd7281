// Solvers for the scalar semilinear Dirichlet problem
//     0 = Laplace v - alpha v^{chi+1},   v = v* on the boundary,
// its alpha-derivative field v', the lower solution driven by the minimal
// boundary trace, and the explicit power-law subsolution on a ball.
//
// The fixed-point iteration freezes the coefficient: each step solves the
// linear problem 0 = Laplace w - alpha w v_k^chi with w = v* on the boundary,
// starting from the harmonic extension of v*. Newton linearizes the full
// residual and damps by halving until the residual drops and the iterate
// stays positive. The hybrid runs the fixed point until the update is small,
// then finishes with Newton; it falls back to the plain fixed point if Newton
// stalls.
#pragma once

#include "ccs/grid.hpp"
#include "ccs/linear_operator.hpp"

namespace ccs {

struct SolverParams {
    double update_tol = 1e-10;     // max-norm update stopping threshold
    double residual_scale = 1e-8;  // residual tol = scale * (1 + alpha * max(v*)^{chi+1})
    double linear_tol = 1e-12;
    int max_picard = 200;
    int max_newton = 50;
    int hybrid_picard_cap = 60;
    double hybrid_switch_update = 1e-3;
    double min_step_factor = 9.5367431640625e-7; // 2^-20: damping underflow
};

enum class SolveMethod { picard, newton, hybrid };

struct SemilinearProblem {
    const Grid* grid = nullptr;
    double alpha = 0.0;
    double chi = 1.0;
    BoundaryValues vstar;

    void validate() const;
    double residual_tol(const SolverParams& params) const;
};

struct SolveReport {
    Field solution;
    int iterations = 0;
    double final_update = 0.0;
    double final_residual = 0.0;
    SolveMethod method = SolveMethod::picard;
};

// Nonconvergence with the last iterate attached.
struct SolveFailure : NonConvergenceError {
    SolveFailure(const std::string& what, SolveReport rep)
        : NonConvergenceError(what, rep.iterations, rep.final_residual),
          report(std::move(rep)) {}
    SolveReport report;
};

// Discrete harmonic extension of the boundary trace (the alpha = 0 solution).
Field harmonic_extension(const Grid& grid, const BoundaryValues& bc,
                         double linear_tol = kDefaultLinearTol);

// Max-norm of Laplace_h v - alpha v^{chi+1} over interior nodes.
double nonlinear_residual_norm(const SemilinearProblem& p, const Field& v);

SolveReport picard_solve(const SemilinearProblem& p, const SolverParams& params);

// initial must be positive everywhere; its boundary entries are replaced by
// the Dirichlet trace.
SolveReport newton_solve(const SemilinearProblem& p, const SolverParams& params,
                         const Field& initial);

// Default strategy. warm_start, when given and positive, is tried with Newton
// directly (continuation use).
SolveReport hybrid_solve(const SemilinearProblem& p, const SolverParams& params,
                         const Field* warm_start = nullptr);

// v' solving  Laplace v' = v^{chi+1} + alpha (chi+1) v^chi v'  with zero
// boundary data; v_alpha must be a converged solution for p.
Field solve_vprime(const SemilinearProblem& p, const Field& v_alpha);

// Solution of the same problem with the constant trace min v* (the lower
// solution; it sits below v_alpha nodewise).
SolveReport lower_solution(const Grid& grid, double alpha, double chi, double vstar_min,
                           const SolverParams& params);

struct SubsolutionParams {
    double beta = 0.0;
    double gamma = 0.0;
};

// beta = sqrt(alpha) (v*_min)^{chi/2} R,  gamma = alpha^{1/chi} v*_min R^{-beta}
SubsolutionParams subsolution_params(double alpha, double chi, double vstar_min, double R);

// The explicit field gamma |x|^beta, evaluated as
// alpha^{1/chi} v*_min (|x|/R)^beta to stay finite for extreme parameters.
// Every node must lie in the closed ball of radius R about the origin.
Field subsolution_field(const Grid& grid, double alpha, double chi, double vstar_min,
                        double R);

} // namespace ccs
