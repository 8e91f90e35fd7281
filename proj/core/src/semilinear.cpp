#include "ccs/semilinear.hpp"

#include <cmath>
#include <limits>

namespace ccs {

void SemilinearProblem::validate() const {
    if (grid == nullptr) throw InvalidSpecError("semilinear problem has no grid");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw InvalidSpecError("semilinear problem requires alpha >= 0");
    if (!(chi > 0.0) || !std::isfinite(chi))
        throw InvalidSpecError("semilinear problem requires chi > 0");
    vstar.validate_finite();
    if (!(vstar.min() > 0.0))
        throw InvalidSpecError("semilinear problem requires a positive boundary trace");
    if (grid->geometry.kind == GeometryKind::radial) {
        for (double v : vstar.values)
            if (v != vstar.values.front())
                throw InvalidSpecError("radial geometry requires a constant boundary trace");
    }
}

double SemilinearProblem::residual_tol(const SolverParams& params) const {
    return params.residual_scale * (1.0 + alpha * std::pow(vstar.max(), chi + 1.0));
}

Field harmonic_extension(const Grid& grid, const BoundaryValues& bc, double linear_tol) {
    const Field zero_c(grid, 0.0);
    const LinearOperator op = assemble(grid, zero_c, bc);
    return solve_spd(op, Field(grid, 0.0), linear_tol);
}

namespace {

// Laplace_h v - alpha v^{chi+1} at interior nodes (zero at boundary nodes).
Field residual_field(const SemilinearProblem& p, const LinearOperator& laplace, const Field& v) {
    Field r = laplace.apply(v); // (-Laplace_h v) at interior nodes
    for (int node = 0; node < p.grid->num_nodes; ++node) {
        if (p.grid->is_boundary(node)) continue;
        r[node] = -r[node] - p.alpha * std::pow(v[node], p.chi + 1.0);
    }
    return r;
}

double interior_max_norm(const Grid& grid, const Field& f) {
    double m = 0.0;
    for (int node = 0; node < grid.num_nodes; ++node)
        if (!grid.is_boundary(node)) m = std::max(m, std::abs(f[node]));
    return m;
}

struct SolveContext {
    const SemilinearProblem& p;
    const SolverParams& params;
    LinearOperator laplace; // c = 0, for residual evaluation
    double rtol;

    SolveContext(const SemilinearProblem& prob, const SolverParams& pars)
        : p(prob),
          params(pars),
          laplace(assemble(*prob.grid, Field(*prob.grid, 0.0), prob.vstar)),
          rtol(prob.residual_tol(pars)) {}

    double residual_norm(const Field& v) const {
        return interior_max_norm(*p.grid, residual_field(p, laplace, v));
    }

    // one frozen-coefficient step: solve 0 = Laplace w - alpha w v^chi, w = v*
    Field picard_step(const Field& v) const {
        Field c(*p.grid);
        for (size_t i = 0; i < c.values.size(); ++i)
            c.values[i] = p.alpha * std::pow(v.values[i], p.chi);
        const LinearOperator op = assemble(*p.grid, c, p.vstar);
        Field w = solve_spd(op, Field(*p.grid, 0.0), params.linear_tol);
        if (!(w.min() > 0.0))
            throw InvariantViolationError(
                "fixed-point iterate has a nonpositive node; the discrete maximum "
                "principle forbids this");
        return w;
    }
};

SolveReport make_report(SolveMethod method, Field v, int iterations, double update,
                        double residual) {
    SolveReport rep;
    rep.solution = std::move(v);
    rep.iterations = iterations;
    rep.final_update = update;
    rep.final_residual = residual;
    rep.method = method;
    return rep;
}

// Newton phase on an existing context. Returns the report on success; throws
// SolveFailure otherwise.
SolveReport newton_phase(const SolveContext& ctx, Field v, int iterations_before) {
    const SemilinearProblem& p = ctx.p;
    const SolverParams& params = ctx.params;
    const BoundaryValues zero_bc = BoundaryValues::constant(*p.grid, 0.0);

    Field r = residual_field(p, ctx.laplace, v);
    double rn = interior_max_norm(*p.grid, r);
    double update = std::numeric_limits<double>::infinity();

    for (int k = 1; k <= params.max_newton; ++k) {
        Field c(*p.grid);
        for (size_t i = 0; i < c.values.size(); ++i)
            c.values[i] = p.alpha * (p.chi + 1.0) * std::pow(v.values[i], p.chi);
        const LinearOperator jac = assemble(*p.grid, c, zero_bc);
        const Field delta = solve_spd(jac, r, params.linear_tol);

        double step = 1.0;
        Field trial(*p.grid);
        double trial_rn = rn;
        bool accepted = false;
        while (step >= params.min_step_factor) {
            for (size_t i = 0; i < v.values.size(); ++i)
                trial.values[i] = v.values[i] + step * delta.values[i];
            if (trial.min() > 0.0) {
                trial_rn = ctx.residual_norm(trial);
                if (trial_rn < rn || trial_rn <= ctx.rtol) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted)
            throw SolveFailure("Newton damping underflow",
                               make_report(SolveMethod::newton, std::move(v),
                                           iterations_before + k, update, rn));
        update = step * interior_max_norm(*p.grid, delta);
        v = trial;
        r = residual_field(p, ctx.laplace, v);
        rn = interior_max_norm(*p.grid, r);
        if (update <= params.update_tol && rn <= ctx.rtol)
            return make_report(SolveMethod::newton, std::move(v), iterations_before + k,
                               update, rn);
    }
    throw SolveFailure("Newton iteration cap exceeded",
                       make_report(SolveMethod::newton, std::move(v),
                                   iterations_before + params.max_newton, update, rn));
}

} // namespace

double nonlinear_residual_norm(const SemilinearProblem& p, const Field& v) {
    const LinearOperator laplace = assemble(*p.grid, Field(*p.grid, 0.0), p.vstar);
    return interior_max_norm(*p.grid, residual_field(p, laplace, v));
}

SolveReport picard_solve(const SemilinearProblem& p, const SolverParams& params) {
    p.validate();
    const SolveContext ctx(p, params);
    Field v = harmonic_extension(*p.grid, p.vstar, params.linear_tol);
    if (p.alpha == 0.0)
        return make_report(SolveMethod::picard, std::move(v), 0, 0.0, 0.0);

    double update = std::numeric_limits<double>::infinity();
    double rn = ctx.residual_norm(v);
    for (int k = 1; k <= params.max_picard; ++k) {
        Field w = ctx.picard_step(v);
        update = max_abs_diff(w, v);
        v = std::move(w);
        rn = ctx.residual_norm(v);
        if (update <= params.update_tol && rn <= ctx.rtol)
            return make_report(SolveMethod::picard, std::move(v), k, update, rn);
    }
    throw SolveFailure("fixed-point iteration cap exceeded",
                       make_report(SolveMethod::picard, std::move(v), params.max_picard,
                                   update, rn));
}

SolveReport newton_solve(const SemilinearProblem& p, const SolverParams& params,
                         const Field& initial) {
    p.validate();
    if (!(initial.min() > 0.0))
        throw InvalidSpecError("newton_solve requires a positive initial field");
    const SolveContext ctx(p, params);
    Field v = initial;
    for (size_t k = 0; k < p.grid->boundary_nodes.size(); ++k)
        v[p.grid->boundary_nodes[k]] = p.vstar.values[k];
    SolveReport rep = newton_phase(ctx, std::move(v), 0);
    return rep;
}

SolveReport hybrid_solve(const SemilinearProblem& p, const SolverParams& params,
                         const Field* warm_start) {
    p.validate();
    if (p.alpha == 0.0) return picard_solve(p, params);
    const SolveContext ctx(p, params);

    if (warm_start != nullptr && warm_start->min() > 0.0) {
        Field v = *warm_start;
        for (size_t k = 0; k < p.grid->boundary_nodes.size(); ++k)
            v[p.grid->boundary_nodes[k]] = p.vstar.values[k];
        try {
            SolveReport rep = newton_phase(ctx, std::move(v), 0);
            rep.method = SolveMethod::hybrid;
            return rep;
        } catch (const SolveFailure&) {
            // fall through to the fixed-point phase
        }
    }

    Field v = harmonic_extension(*p.grid, p.vstar, params.linear_tol);
    int steps = 0;
    double update = std::numeric_limits<double>::infinity();
    while (steps < params.hybrid_picard_cap) {
        Field w = ctx.picard_step(v);
        update = max_abs_diff(w, v);
        v = std::move(w);
        ++steps;
        if (update <= params.update_tol) {
            const double rn = ctx.residual_norm(v);
            if (rn <= ctx.rtol)
                return make_report(SolveMethod::hybrid, std::move(v), steps, update, rn);
        }
        if (update <= params.hybrid_switch_update) break;
    }
    // The iterates alternate around the fixed point; even-numbered ones sit
    // above it, where Newton on this convex nonlinearity descends cleanly.
    if (steps % 2 == 1) {
        v = ctx.picard_step(v);
        ++steps;
    }
    try {
        SolveReport rep = newton_phase(ctx, v, steps);
        rep.method = SolveMethod::hybrid;
        return rep;
    } catch (const SolveFailure&) {
        // Newton stalled; grind on with the fixed point.
    }
    double rn = ctx.residual_norm(v);
    for (int k = steps + 1; k <= params.max_picard; ++k) {
        Field w = ctx.picard_step(v);
        update = max_abs_diff(w, v);
        v = std::move(w);
        rn = ctx.residual_norm(v);
        if (update <= params.update_tol && rn <= ctx.rtol)
            return make_report(SolveMethod::hybrid, std::move(v), k, update, rn);
    }
    throw SolveFailure("hybrid solve exhausted both phases",
                       make_report(SolveMethod::hybrid, std::move(v), params.max_picard,
                                   update, rn));
}

Field solve_vprime(const SemilinearProblem& p, const Field& v_alpha) {
    p.validate();
    if (!(v_alpha.min() > 0.0))
        throw InvalidSpecError("solve_vprime requires a positive converged solution");
    Field c(*p.grid);
    Field rhs(*p.grid);
    for (size_t i = 0; i < c.values.size(); ++i) {
        c.values[i] = p.alpha * (p.chi + 1.0) * std::pow(v_alpha.values[i], p.chi);
        rhs.values[i] = -std::pow(v_alpha.values[i], p.chi + 1.0);
    }
    const BoundaryValues zero_bc = BoundaryValues::constant(*p.grid, 0.0);
    const LinearOperator op = assemble(*p.grid, c, zero_bc);
    return solve_spd(op, rhs);
}

SolveReport lower_solution(const Grid& grid, double alpha, double chi, double vstar_min,
                           const SolverParams& params) {
    SemilinearProblem p;
    p.grid = &grid;
    p.alpha = alpha;
    p.chi = chi;
    p.vstar = BoundaryValues::constant(grid, vstar_min);
    return hybrid_solve(p, params);
}

SubsolutionParams subsolution_params(double alpha, double chi, double vstar_min, double R) {
    SubsolutionParams sp;
    sp.beta = std::sqrt(alpha) * std::pow(vstar_min, 0.5 * chi) * R;
    sp.gamma = std::pow(alpha, 1.0 / chi) * vstar_min * std::pow(R, -sp.beta);
    return sp;
}

Field subsolution_field(const Grid& grid, double alpha, double chi, double vstar_min,
                        double R) {
    if (!(alpha > 0.0)) throw InvalidSpecError("subsolution_field requires alpha > 0");
    if (!(chi > 0.0)) throw InvalidSpecError("subsolution_field requires chi > 0");
    if (!(vstar_min > 0.0) || !(R > 0.0))
        throw InvalidSpecError("subsolution_field requires positive v*_min and R");

    const SubsolutionParams sp = subsolution_params(alpha, chi, vstar_min, R);
    const double peak = std::pow(alpha, 1.0 / chi) * vstar_min; // value at |x| = R
    Field z(grid);
    for (int node = 0; node < grid.num_nodes; ++node) {
        double rho;
        if (grid.geometry.kind == GeometryKind::rectangle)
            rho = std::hypot(grid.coord_x[static_cast<size_t>(node)],
                             grid.coord_y[static_cast<size_t>(node)]);
        else
            rho = std::abs(grid.coord_x[static_cast<size_t>(node)]);
        if (rho > R * (1.0 + 1e-12))
            throw InvalidSpecError("subsolution_field: grid node outside the ball of radius R");
        z[node] = peak * std::pow(std::min(rho / R, 1.0), sp.beta);
    }
    return z;
}

} // namespace ccs
