#include "ccs/mass_map.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ccs {

SectorSpec SectorSpec::full_shell(int dim, double outer_radius) {
    SectorSpec s;
    s.dim = dim;
    s.outer_radius = outer_radius;
    s.delta = outer_radius;
    s.validate();
    return s;
}

void SectorSpec::validate() const {
    if (dim < 2) throw InvalidSpecError("sector requires dimension d >= 2");
    if (!(outer_radius > 0.0)) throw InvalidSpecError("sector requires R > 0");
    if (!(delta > 0.0) || delta > outer_radius)
        throw InvalidSpecError("sector requires delta in (0, R]");
}

double cap_surface_measure(int dim, double delta) {
    if (dim < 2) throw InvalidSpecError("cap_surface_measure requires d >= 2");
    if (!(delta > 0.0)) throw InvalidSpecError("cap_surface_measure requires delta > 0");
    if (delta >= 2.0) return unit_sphere_area(dim); // chordal distance caps at 2
    const double theta_max = 2.0 * std::asin(0.5 * delta);
    if (dim == 2) return 2.0 * theta_max;
    if (dim == 3) return 2.0 * std::numbers::pi * (1.0 - std::cos(theta_max));
    // cap area = |S^{d-2}| * integral_0^theta sin^{d-2}
    const int panels = 4096;
    const double h = theta_max / panels;
    double simpson = 0.0;
    for (int k = 0; k <= panels; ++k) {
        const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        simpson += w * std::pow(std::sin(k * h), dim - 2);
    }
    return unit_sphere_area(dim - 1) * simpson * h / 3.0;
}

double mass(double alpha, const Field& v_alpha, double chi) {
    Field density(*v_alpha.grid);
    for (size_t i = 0; i < density.values.size(); ++i)
        density.values[i] = alpha * std::pow(v_alpha.values[i], chi);
    return integrate(density);
}

double mass_derivative(double alpha, const Field& v_alpha, const Field& vprime, double chi) {
    Field integrand(*v_alpha.grid);
    for (size_t i = 0; i < integrand.values.size(); ++i) {
        const double v = v_alpha.values[i];
        const double s = v + alpha * chi * vprime.values[i]; // in [0, v] for a correct solve
        integrand.values[i] = std::pow(v, chi - 1.0) * s;
    }
    const double result = integrate(integrand);
    if (!(result > 0.0))
        throw InvariantViolationError("mass derivative came out nonpositive; the mass map "
                                      "is strictly increasing");
    return result;
}

double lower_mass(double alpha, const Grid& grid, double chi, double vstar_min,
                  const SolverParams& params) {
    const SolveReport rep = lower_solution(grid, alpha, chi, vstar_min, params);
    return mass(alpha, rep.solution, chi);
}

double sector_lower_bound(const SectorSpec& spec, double alpha, double chi,
                          double vstar_min) {
    spec.validate();
    if (!(alpha > 0.0)) throw InvalidSpecError("sector_lower_bound requires alpha > 0");
    if (!(chi > 0.0) || !(vstar_min > 0.0))
        throw InvalidSpecError("sector_lower_bound requires chi > 0 and v*_min > 0");

    const double R = spec.outer_radius;
    const double sigma = cap_surface_measure(spec.dim, spec.delta);
    const double beta = subsolution_params(alpha, chi, vstar_min, R).beta;
    const double exponent = chi * beta + spec.dim;
    // 1 - (1 - delta/R)^{chi beta + d}; underflows to 1 for steep exponents
    const double shell = 1.0 - std::pow(1.0 - spec.delta / R, exponent);
    // denominator chi sqrt(alpha) (v*)^{chi/2} R + d, kept in log space so
    // extreme parameters cannot overflow an intermediate
    const double log_a = std::log(chi) + 0.5 * std::log(alpha) +
                         0.5 * chi * std::log(vstar_min) + std::log(R);
    const double log_denom =
        log_a > 700.0 ? log_a : std::log(std::exp(log_a) + spec.dim);
    // R^{-chi beta} * R^{chi beta + d} collapses to R^d in log space
    const double log_value = std::log(sigma) + std::log(alpha) + chi * std::log(vstar_min) +
                             spec.dim * std::log(R) - log_denom + std::log(shell);
    return std::exp(log_value); // +inf on overflow: the divergence is the point
}

namespace {

struct MassEvaluator {
    const SemilinearProblem& tpl;
    const SolverParams& sp;
    double alpha = -1.0;
    Field v{};
    double m = 0.0;
    int evaluations = 0;

    void move_to(double new_alpha) {
        SemilinearProblem q = tpl;
        q.alpha = new_alpha;
        const Field* warm = (alpha >= 0.0) ? &v : nullptr;
        SolveReport rep = (new_alpha == 0.0) ? picard_solve(q, sp) : hybrid_solve(q, sp, warm);
        alpha = new_alpha;
        v = std::move(rep.solution);
        m = mass(alpha, v, tpl.chi);
        ++evaluations;
    }

    double derivative() const {
        SemilinearProblem q = tpl;
        q.alpha = alpha;
        const Field vp = solve_vprime(q, v);
        return mass_derivative(alpha, v, vp, tpl.chi);
    }
};

} // namespace

InversionResult invert_mass(double target_mass, const SemilinearProblem& problem_template,
                            const MassParams& mass_params, const SolverParams& solver_params) {
    problem_template.validate();
    if (!(target_mass > 0.0)) throw InvalidSpecError("invert_mass requires target mass > 0");

    const Grid& grid = *problem_template.grid;
    const double chi = problem_template.chi;
    const double slope = std::pow(problem_template.vstar.max(), chi) * grid.volume();

    MassEvaluator eval{problem_template, solver_params};

    // m(alpha) <= alpha max(v*)^chi |Omega|, so this starting point cannot
    // overshoot the target. A start beyond alpha_cap already proves the
    // target unreachable within the cap (m is increasing).
    double lo = std::min(target_mass / slope, mass_params.alpha_cap);
    eval.move_to(lo);
    double m_lo = eval.m;

    double hi = lo, m_hi = m_lo;
    while (m_hi < target_mass) {
        const double next = hi * mass_params.doubling;
        if (next > mass_params.alpha_cap) {
            double best_lower = 0.0;
            try {
                best_lower = lower_mass(hi, grid, chi, problem_template.vstar.min(),
                                        solver_params);
            } catch (const Error&) {
                best_lower = std::numeric_limits<double>::quiet_NaN();
            }
            throw MassUnreachableError(
                "mass possibly unreachable: bracket expansion exceeded alpha_cap", hi, m_hi,
                best_lower);
        }
        hi = next;
        eval.move_to(hi);
        m_hi = eval.m;
    }

    // safeguarded Newton on the bracket [lo, hi], m(lo) <= target <= m(hi)
    double x = eval.alpha;
    double m_x = eval.m;
    double m_prime = 0.0;
    for (int it = 0; it < mass_params.max_root_iter; ++it) {
        if (std::abs(m_x - target_mass) <= mass_params.mass_tol * target_mass) {
            InversionResult res;
            res.alpha = x;
            res.v = eval.v;
            res.sample.alpha = x;
            res.sample.m = m_x;
            res.sample.m_prime = eval.derivative();
            res.sample.m_lower = lower_mass(x, grid, chi, problem_template.vstar.min(),
                                            solver_params);
            res.evaluations = eval.evaluations;
            return res;
        }
        if (m_x < target_mass) lo = x; else hi = x;
        m_prime = eval.derivative();
        double next = x - (m_x - target_mass) / m_prime;
        if (!std::isfinite(next) || !(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        x = next;
        eval.move_to(x);
        m_x = eval.m;
    }
    throw NonConvergenceError("mass inversion hit its iteration cap",
                              mass_params.max_root_iter, std::abs(m_x - target_mass));
}

std::vector<SweepRow> mass_sweep(const SemilinearProblem& problem_template,
                                 const std::vector<double>& alphas,
                                 const SolverParams& solver_params,
                                 const std::optional<SectorSpec>& sector) {
    problem_template.validate();
    std::vector<SweepRow> rows;
    rows.reserve(alphas.size());

    const double vstar_min = problem_template.vstar.min();
    const Grid& grid = *problem_template.grid;
    Field warm, warm_lower;
    bool have_warm = false, have_warm_lower = false;

    SemilinearProblem lower_tpl = problem_template;
    lower_tpl.vstar = BoundaryValues::constant(grid, vstar_min);

    for (double alpha : alphas) {
        SweepRow row;
        row.alpha = alpha;
        try {
            SemilinearProblem q = problem_template;
            q.alpha = alpha;
            SolveReport rep = (alpha == 0.0)
                                  ? picard_solve(q, solver_params)
                                  : hybrid_solve(q, solver_params, have_warm ? &warm : nullptr);
            const Field& v = rep.solution;
            const Field vp = solve_vprime(q, v);

            MassSample sample;
            sample.alpha = alpha;
            sample.m = mass(alpha, v, q.chi);
            sample.m_prime = mass_derivative(alpha, v, vp, q.chi);

            SemilinearProblem ql = lower_tpl;
            ql.alpha = alpha;
            SolveReport lower_rep =
                (alpha == 0.0) ? picard_solve(ql, solver_params)
                               : hybrid_solve(ql, solver_params,
                                              have_warm_lower ? &warm_lower : nullptr);
            sample.m_lower = mass(alpha, lower_rep.solution, q.chi);

            if (sector.has_value())
                sample.sector_bound =
                    alpha > 0.0 ? sector_lower_bound(*sector, alpha, q.chi, vstar_min) : 0.0;

            warm = v;
            have_warm = true;
            warm_lower = lower_rep.solution;
            have_warm_lower = true;
            row.sample = std::move(sample);
        } catch (const SolveFailure&) {
            row.error_class = "nonconvergence";
        } catch (const InvariantViolationError&) {
            row.error_class = "invariant-violation";
        } catch (const Error&) {
            row.error_class = "error";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ccs
