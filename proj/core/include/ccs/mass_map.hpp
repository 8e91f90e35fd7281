// The mass map m(alpha) = integral of alpha v_alpha^chi, its analytic
// derivative, the lower mass driven by the minimal boundary trace, the
// closed-form sector lower bound, and the bracketed inversion of m.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccs/semilinear.hpp"

namespace ccs {

struct MassParams {
    double mass_tol = 1e-8;   // relative tolerance on |m(alpha) - target|
    double alpha_cap = 1e12;  // bracket expansion gives up past this
    double doubling = 2.0;
    int max_root_iter = 200;
};

struct MassSample {
    double alpha = 0.0;
    double m = 0.0;
    double m_prime = 0.0;
    double m_lower = 0.0;
    std::optional<double> sector_bound; // set only when the geometry embeds in a ball
};

// Spherical-shell sector: depth delta below radius R, angular patch
// {omega : |omega - omega0| < delta} (chordal distance on the unit sphere).
struct SectorSpec {
    int dim = 2;
    double outer_radius = 1.0;
    double delta = 1.0;

    static SectorSpec full_shell(int dim, double outer_radius);
    void validate() const; // dim >= 2, 0 < delta <= R
};

// (d-1)-measure of the chordal cap {omega in S^{d-1} : |omega - omega0| < delta}.
// delta >= 2 covers the whole sphere. d = 2 and d = 3 are closed forms; higher
// d uses quadrature of the cap integral.
double cap_surface_measure(int dim, double delta);

// integral of alpha v^chi; v must be a converged solution for alpha.
double mass(double alpha, const Field& v_alpha, double chi);

// integral of v^{chi-1} (v + alpha chi v'); strictly positive for a correct
// solver, so a nonpositive value throws InvariantViolationError.
double mass_derivative(double alpha, const Field& v_alpha, const Field& vprime, double chi);

// integral of alpha (lower solution)^chi.
double lower_mass(double alpha, const Grid& grid, double chi, double vstar_min,
                  const SolverParams& params);

// Closed-form lower bound for the lower mass on a sector:
//   sigma_d alpha (v*)^chi R^{-chi beta} / (chi sqrt(alpha) (v*)^{chi/2} R + d)
//     * R^{chi beta + d} (1 - (1 - delta/R)^{chi beta + d})
// with beta from subsolution_params. Evaluated in log space; an overflowing
// value is reported as +infinity (the bound diverges by design).
double sector_lower_bound(const SectorSpec& spec, double alpha, double chi, double vstar_min);

struct InversionResult {
    double alpha = 0.0;
    Field v;            // solution at the returned alpha
    MassSample sample;  // m, m', m_lower at the returned alpha
    int evaluations = 0;
};

// Finds alpha with |m(alpha) - target| <= mass_tol * target. Bracket from the
// linear bound alpha_lo = target / (max(v*)^chi |Omega|), geometric expansion
// of alpha_hi, then safeguarded Newton with bisection fallback. Solves are
// warm-started from the previous alpha (continuation). Throws
// MassUnreachableError if alpha_cap is exceeded before m brackets the target.
InversionResult invert_mass(double target_mass, const SemilinearProblem& problem_template,
                            const MassParams& mass_params, const SolverParams& solver_params);

struct SweepRow {
    double alpha = 0.0;
    std::optional<MassSample> sample; // empty on failure
    std::string error_class;          // failure marker detail
};

// Evaluates the mass map on an increasing alpha grid with continuation.
// Sector bounds are attached when `sector` is given. Single-alpha failures
// are recorded in-row and the sweep continues.
std::vector<SweepRow> mass_sweep(const SemilinearProblem& problem_template,
                                 const std::vector<double>& alphas,
                                 const SolverParams& solver_params,
                                 const std::optional<SectorSpec>& sector);

} // namespace ccs
