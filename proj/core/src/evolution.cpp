#include "ccs/evolution.hpp"

#include <cmath>

#include "face_geometry.hpp"

namespace ccs {

EvolutionState EvolutionState::start(Field u0, Field v0) {
    EvolutionState s;
    s.initial_mass = integrate(u0);
    s.u = std::move(u0);
    s.v = std::move(v0);
    return s;
}

namespace {

// logarithmic mean (a-b)/log(a/b), continuous at a = b, zero if either
// argument vanishes (no cells, no chemotactic flux)
double log_mean(double a, double b) {
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
    if (a == 0.0 || b == 0.0) return 0.0;
    const double zeta = (a - b) / (a + b);
    if (std::abs(zeta) < 1e-4) {
        const double z2 = zeta * zeta;
        return 0.5 * (a + b) / (1.0 + z2 / 3.0 + z2 * z2 / 5.0);
    }
    return (a - b) / std::log(a / b);
}

// SPD all-node system M x = b with M = diag(m) + flux couplings; tridiagonal
// elimination on one-axis grids, Jacobi CG otherwise.
struct NeumannSystem {
    const Grid* grid;
    const detail::FaceGeometry* faces;
    std::vector<double> diag;

    NeumannSystem(const Grid& g, const detail::FaceGeometry& fg, double dt)
        : grid(&g), faces(&fg), diag(static_cast<size_t>(g.num_nodes)) {
        for (int i = 0; i < g.num_nodes; ++i)
            diag[static_cast<size_t>(i)] = g.weights[static_cast<size_t>(i)] / dt;
        for (size_t f = 0; f < fg.coef.size(); ++f) {
            diag[static_cast<size_t>(fg.na[f])] += fg.coef[f];
            diag[static_cast<size_t>(fg.nb[f])] += fg.coef[f];
        }
    }

    void matvec(const std::vector<double>& x, std::vector<double>& y) const {
        for (size_t i = 0; i < x.size(); ++i) y[i] = diag[i] * x[i];
        for (size_t f = 0; f < faces->coef.size(); ++f) {
            const size_t a = static_cast<size_t>(faces->na[f]);
            const size_t b = static_cast<size_t>(faces->nb[f]);
            y[a] -= faces->coef[f] * x[b];
            y[b] -= faces->coef[f] * x[a];
        }
    }

    std::vector<double> solve(const std::vector<double>& b, double tol) const {
        if (grid->geometry.axes() == 1) return solve_tridiag(b);
        return solve_cg(b, tol);
    }

    std::vector<double> solve_tridiag(std::vector<double> b) const {
        const int n = grid->num_nodes;
        std::vector<double> low(static_cast<size_t>(n), 0.0), up(static_cast<size_t>(n), 0.0);
        std::vector<double> d = diag;
        for (size_t f = 0; f < faces->coef.size(); ++f) {
            up[static_cast<size_t>(faces->na[f])] = -faces->coef[f];
            low[static_cast<size_t>(faces->nb[f])] = -faces->coef[f];
        }
        for (int k = 1; k < n; ++k) {
            const double w = low[static_cast<size_t>(k)] / d[static_cast<size_t>(k) - 1];
            d[static_cast<size_t>(k)] -= w * up[static_cast<size_t>(k) - 1];
            b[static_cast<size_t>(k)] -= w * b[static_cast<size_t>(k) - 1];
        }
        std::vector<double> x(static_cast<size_t>(n));
        x[static_cast<size_t>(n) - 1] =
            b[static_cast<size_t>(n) - 1] / d[static_cast<size_t>(n) - 1];
        for (int k = n - 2; k >= 0; --k)
            x[static_cast<size_t>(k)] = (b[static_cast<size_t>(k)] -
                                         up[static_cast<size_t>(k)] * x[static_cast<size_t>(k) + 1]) /
                                        d[static_cast<size_t>(k)];
        return x;
    }

    std::vector<double> solve_cg(const std::vector<double>& b, double tol) const {
        const size_t n = b.size();
        std::vector<double> x(n, 0.0), r = b, z(n), p(n), q(n);
        auto dot = [n](const std::vector<double>& u, const std::vector<double>& w) {
            double s = 0.0;
            for (size_t i = 0; i < n; ++i) s += u[i] * w[i];
            return s;
        };
        for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
        double rz = dot(r, z);
        if (rz == 0.0) return x;
        const double target = tol * std::sqrt(rz);
        p = z;
        const int cap = 20 * static_cast<int>(n);
        for (int it = 0; it < cap; ++it) {
            matvec(p, q);
            const double alpha = rz / dot(p, q);
            for (size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
            const double rz_next = dot(r, z);
            if (std::sqrt(std::max(rz_next, 0.0)) <= target) return x;
            const double beta = rz_next / rz;
            rz = rz_next;
            for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        throw NonConvergenceError("time-step CG hit the iteration cap", cap, std::sqrt(rz));
    }
};

} // namespace

EvolutionState step(const EvolutionState& state, double dt, double chi,
                    const BoundaryValues& vstar, double linear_tol) {
    const Grid& g = *state.u.grid;
    if (!(dt > 0.0)) throw InvalidSpecError("step requires dt > 0");
    if (!(state.v.min() > 0.0))
        throw InvalidSpecError("step requires a positive signal field");

    const detail::FaceGeometry faces = detail::build_faces(g);

    // u update, increment form: (w/dt - L) du = L u + C(u, v), all explicit
    // fluxes evaluated at the current state. Both flux sums telescope, so the
    // quadrature mass of u is untouched up to the linear solve residual.
    std::vector<double> rhs(static_cast<size_t>(g.num_nodes), 0.0);
    std::vector<double> logv(static_cast<size_t>(g.num_nodes));
    for (int i = 0; i < g.num_nodes; ++i) logv[static_cast<size_t>(i)] = std::log(state.v[i]);
    for (size_t f = 0; f < faces.coef.size(); ++f) {
        const int a = faces.na[f];
        const int b = faces.nb[f];
        const double u_face = log_mean(state.u[a], state.u[b]);
        const double flux = faces.coef[f] *
                            ((state.u[b] - state.u[a]) -
                             chi * u_face * (logv[static_cast<size_t>(b)] - logv[static_cast<size_t>(a)]));
        rhs[static_cast<size_t>(a)] += flux;
        rhs[static_cast<size_t>(b)] -= flux;
    }
    const NeumannSystem usys(g, faces, dt);
    const std::vector<double> du = usys.solve(rhs, linear_tol);

    // v update: implicit diffusion, explicit consumption, Dirichlet trace
    Field c(g, 1.0 / dt);
    const LinearOperator vop = assemble(g, c, vstar);
    Field vrhs(g);
    for (int i = 0; i < g.num_nodes; ++i)
        vrhs[i] = state.v[i] / dt - state.u[i] * state.v[i];
    Field v_new = solve_spd(vop, vrhs, std::max(linear_tol, 1e-13));
    if (!(v_new.min() > 0.0))
        throw StepRejectedError("signal reached a nonpositive node; shrink dt");

    EvolutionState next;
    next.time = state.time + dt;
    next.u = state.u;
    for (int i = 0; i < g.num_nodes; ++i) next.u[i] += du[static_cast<size_t>(i)];
    next.v = std::move(v_new);
    next.initial_mass = state.initial_mass;
    next.mass_drift = std::abs(integrate(next.u) - state.initial_mass);
    next.steps = state.steps + 1;
    return next;
}

EvolutionTrace evolve_to_steady(const EvolutionState& initial, double chi,
                                const BoundaryValues& vstar, double T,
                                const EvolutionParams& params, const Field* u_reference,
                                const Field* v_reference) {
    if (!(T > 0.0)) throw InvalidSpecError("evolve_to_steady requires T > 0");
    const Grid& g = *initial.u.grid;
    double dt = params.dt;
    if (!(dt > 0.0)) {
        const double h = g.spacing[0] > 0.0 ? g.spacing[0] : g.spacing[1];
        const double hmin = g.geometry.axes() == 2 ? std::min(g.spacing[0], g.spacing[1]) : h;
        dt = 0.25 * hmin * hmin;
    }
    const double dt_floor = 1e-14 * dt;

    EvolutionTrace trace;
    EvolutionState s = initial;
    auto record = [&](const EvolutionState& st) {
        trace.t.push_back(st.time);
        trace.dist_u.push_back(u_reference ? max_abs_diff(st.u, *u_reference) : 0.0);
        trace.dist_v.push_back(v_reference ? max_abs_diff(st.v, *v_reference) : 0.0);
        trace.mass_u.push_back(integrate(st.u));
    };
    record(s);

    while (s.time < T - 0.5 * dt) {
        EvolutionState next;
        try {
            next = step(s, dt, chi, vstar, params.linear_tol);
        } catch (const StepRejectedError&) {
            dt *= 0.5;
            if (dt < dt_floor)
                throw NonConvergenceError(
                    "time step rejection cascade: dt underflowed while keeping the signal "
                    "positive",
                    static_cast<int>(s.steps), dt);
            continue;
        }
        const double rate = max_abs_diff(next.u, s.u) / dt;
        s = std::move(next);
        if (s.steps % params.record_stride == 0) record(s);
        if (params.stall_tol > 0.0 && rate <= params.stall_tol) {
            trace.stalled = true;
            break;
        }
    }
    if (trace.t.back() != s.time) record(s);
    trace.final_state = std::move(s);
    return trace;
}

} // namespace ccs
