#include "ccs/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "ccs/evolution.hpp"
#include "ccs/numeric_io.hpp"
#include "ccs/steady_state.hpp"

namespace ccs {

namespace {

struct Suite {
    std::vector<CheckResult> results;

    void run(const std::string& name, const std::function<void(std::ostringstream&)>& body) {
        CheckResult r;
        r.name = name;
        std::ostringstream detail;
        try {
            body(detail);
            r.pass = detail.str().empty();
            r.detail = detail.str();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        results.push_back(std::move(r));
    }
};

void expect(std::ostringstream& out, bool cond, const std::string& what) {
    if (!cond && out.str().empty()) out << what;
}

std::vector<Grid> standard_grids(int n1, int n2) {
    return {build_grid(GeometrySpec::make_interval(0.0, 1.0), n1),
            build_grid(GeometrySpec::make_rectangle(1.0, 1.0), n2),
            build_grid(GeometrySpec::make_radial(3, 1.0, 0.0), n1)};
}

Field solve_simple(const Grid& g, double alpha, double chi, double vstar,
                   const SolverParams& sp) {
    SemilinearProblem p;
    p.grid = &g;
    p.alpha = alpha;
    p.chi = chi;
    p.vstar = BoundaryValues::constant(g, vstar);
    return hybrid_solve(p, sp).solution;
}

void check_grid_quadrature(std::ostringstream& out) {
    for (int n : {5, 11, 51}) {
        {
            const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), n);
            expect(out, std::abs(g.volume() - 1.0) <= 10 * 1e-16, "interval volume off");
        }
        {
            const Grid g = build_grid(GeometrySpec::make_rectangle(2.0, 0.5), n);
            expect(out, std::abs(g.volume() - 1.0) <= 10 * 1e-16, "rectangle volume off");
        }
        for (int d : {2, 3}) {
            const Grid g = build_grid(GeometrySpec::make_radial(d, 1.0, 0.0), n);
            const double exact = g.geometry.measure();
            const double h = g.spacing[0];
            expect(out, std::abs(g.volume() - exact) <= 2.0 * exact * h * h,
                   "ball volume beyond O(h^2)");
        }
        {
            const Grid g = build_grid(GeometrySpec::make_radial(2, 1.0, 0.25), n);
            const double exact = g.geometry.measure();
            const double h = g.spacing[0];
            expect(out, std::abs(g.volume() - exact) <= 2.0 * exact * h * h,
                   "annulus volume beyond O(h^2)");
        }
    }
}

void check_gradient_constant(std::ostringstream& out) {
    for (const Grid& g : standard_grids(17, 9)) {
        const Field f(g, 3.25);
        for (const Field& comp : gradient(f))
            for (double v : comp.values)
                expect(out, v == 0.0, "gradient of a constant is not exactly zero");
    }
}

void check_divergence_theorem(std::ostringstream& out) {
    // compactly supported bump: the integral of its divergence vanishes
    auto bump = [](double s) { return s * s * (1.0 - s) * (1.0 - s); };
    {
        const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 101);
        Field f(g);
        for (int i = 0; i < g.num_nodes; ++i) f[i] = bump(g.coord_x[static_cast<size_t>(i)]);
        const double integral = integrate(gradient(f)[0]);
        expect(out, std::abs(integral) <= 1e-4, "1D divergence integral too large");
    }
    {
        const Grid g = build_grid(GeometrySpec::make_rectangle(1.0, 1.0), 41);
        Field fx(g), fy(g);
        for (int i = 0; i < g.num_nodes; ++i) {
            const double x = g.coord_x[static_cast<size_t>(i)];
            const double y = g.coord_y[static_cast<size_t>(i)];
            fx[i] = bump(x) * bump(y);
            fy[i] = bump(y) * bump(x);
        }
        Field div(g);
        const Field dfx = gradient(fx)[0];
        const Field dfy = gradient(fy)[1];
        for (int i = 0; i < g.num_nodes; ++i) div[i] = dfx[i] + dfy[i];
        expect(out, std::abs(integrate(div)) <= 1e-4, "2D divergence integral too large");
    }
}

void check_maximum_principle(std::ostringstream& out) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const Grid& g : standard_grids(21, 13)) {
        for (int rep = 0; rep < 5; ++rep) {
            Field c(g);
            for (double& v : c.values) v = 4.0 * unif(rng);
            BoundaryValues bc = BoundaryValues::constant(g, 0.0);
            for (double& v : bc.values) v = 0.5 + unif(rng);
            const LinearOperator op = assemble(g, c, bc);
            const Field w = solve_spd(op, Field(g, 0.0));
            expect(out, w.min() > 0.0, "solution lost positivity");
            expect(out, w.max() <= bc.max() + 1e-12, "solution exceeds max boundary value");

            // nonpositive right-hand side only lowers the solution
            Field rhs(g);
            for (double& v : rhs.values) v = -unif(rng);
            const Field w2 = solve_spd(op, rhs);
            for (int i = 0; i < g.num_nodes; ++i)
                expect(out, w2[i] <= w[i] + 1e-12, "rhs <= 0 failed to lower the solution");

            // with c = 0 the full two-sided bound holds
            const LinearOperator harmonic_op = assemble(g, Field(g, 0.0), bc);
            const Field wh = solve_spd(harmonic_op, Field(g, 0.0));
            expect(out, wh.min() >= bc.min() - 1e-12 && wh.max() <= bc.max() + 1e-12,
                   "harmonic solution escaped the boundary range");
        }
    }
}

void check_operator_symmetry(std::ostringstream& out) {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (const Grid& g : standard_grids(19, 11)) {
        Field c(g);
        for (double& v : c.values) v = 0.5 * (unif(rng) + 1.0);
        const LinearOperator op = assemble(g, c, BoundaryValues::constant(g, 1.0));
        Field x(g, 0.0), y(g, 0.0);
        for (int i = 0; i < g.num_nodes; ++i)
            if (!g.is_boundary(i)) {
                x[i] = unif(rng);
                y[i] = unif(rng);
            }
        const Field ax = op.apply(x);
        const Field ay = op.apply(y);
        double left = 0.0, right = 0.0, scale = 0.0;
        for (int i = 0; i < g.num_nodes; ++i) {
            const double vol = op.cell_volume(i);
            left += vol * ax[i] * y[i];
            right += vol * x[i] * ay[i];
            scale += vol * std::abs(ax[i] * y[i]);
        }
        expect(out, std::abs(left - right) <= 1e-12 * std::max(scale, 1.0),
               "operator is not self-adjoint in the cell-volume inner product");
    }
}

void check_lemma3_bound(std::ostringstream& out) {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> alpha_dist(0.0, 16.0);
    const double chis[3] = {0.5, 1.0, 2.0};
    SolverParams sp;
    for (const Grid& g : standard_grids(41, 21)) {
        for (int rep = 0; rep < 4; ++rep) {
            const double alpha = alpha_dist(rng);
            const double chi = chis[rep % 3];
            const double vstar = 0.5 + 1.5 * std::generate_canonical<double, 53>(rng);
            const Field v = solve_simple(g, alpha, chi, vstar, sp);
            expect(out, v.min() > 0.0, "solution lost positivity");
            expect(out, v.max() <= vstar + 1e-12, "solution exceeds max v*");
        }
    }
}

void check_lemma4_monotonicity(std::ostringstream& out) {
    SolverParams sp;
    for (const Grid& g : standard_grids(41, 21)) {
        Field prev;
        bool first = true;
        for (double alpha : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const Field v = solve_simple(g, alpha, 1.0, 1.0, sp);
            if (!first)
                for (int i = 0; i < g.num_nodes; ++i)
                    expect(out, v[i] <= prev[i] + 1e-9, "v_alpha increased with alpha");
            prev = v;
            first = false;
        }
    }
}

void check_lemma6_lower_bound(std::ostringstream& out) {
    SolverParams sp;
    const double alpha_star = 8.0;
    for (const Grid& g : standard_grids(41, 21)) {
        const Field v_star = solve_simple(g, alpha_star, 1.0, 1.0, sp);
        const double floor = v_star.min();
        for (double alpha : {0.0, 1.0, 3.0, 6.0}) {
            const Field v = solve_simple(g, alpha, 1.0, 1.0, sp);
            expect(out, v.min() >= floor - 1e-9, "explicit lower bound violated");
        }
    }
}

void check_lemma9_sign(std::ostringstream& out) {
    SolverParams sp;
    for (const Grid& g : standard_grids(41, 21)) {
        for (double alpha : {0.5, 2.0, 8.0}) {
            SemilinearProblem p;
            p.grid = &g;
            p.alpha = alpha;
            p.chi = 1.5;
            p.vstar = BoundaryValues::constant(g, 1.0);
            const Field v = hybrid_solve(p, sp).solution;
            const Field vp = solve_vprime(p, v);
            for (int i = 0; i < g.num_nodes; ++i) {
                expect(out, vp[i] <= 1e-12, "v' must be nonpositive");
                expect(out, v[i] + alpha * p.chi * vp[i] >= -1e-9,
                       "v + alpha chi v' must be nonnegative");
            }
        }
    }
}

void check_eq38_residual(std::ostringstream& out) {
    SolverParams sp;
    for (const Grid& g : standard_grids(41, 21)) {
        const double alpha = 2.0, chi = 1.0;
        SemilinearProblem p;
        p.grid = &g;
        p.alpha = alpha;
        p.chi = chi;
        p.vstar = BoundaryValues::constant(g, 1.0);
        const Field v = hybrid_solve(p, sp).solution;
        const Field vp = solve_vprime(p, v);
        Field s(g);
        for (int i = 0; i < g.num_nodes; ++i) s[i] = v[i] + alpha * chi * vp[i];
        const LinearOperator laplace = assemble(g, Field(g, 0.0), p.vstar);
        const Field neg_lap = laplace.apply(s);
        for (int i = 0; i < g.num_nodes; ++i) {
            if (g.is_boundary(i)) continue;
            const double residual =
                -neg_lap[i] - alpha * (chi + 1.0) * std::pow(v[i], chi) * s[i];
            expect(out, std::abs(residual) <= 1e-8, "identity for v + alpha chi v' broken");
        }
    }
}

void check_lemma10_derivative(std::ostringstream& out) {
    SolverParams sp;
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 101);
    for (double alpha : {0.5, 1.0, 4.0}) {
        SemilinearProblem p;
        p.grid = &g;
        p.alpha = alpha;
        p.chi = 1.0;
        p.vstar = BoundaryValues::constant(g, 1.0);
        const Field v = hybrid_solve(p, sp).solution;
        const Field vp = solve_vprime(p, v);
        const double mprime = mass_derivative(alpha, v, vp, p.chi);
        expect(out, mprime > 0.0, "mass derivative not positive");

        const double h = 1e-3 * alpha;
        SemilinearProblem pl = p, ph = p;
        pl.alpha = alpha - h;
        ph.alpha = alpha + h;
        const double ml = mass(pl.alpha, hybrid_solve(pl, sp, &v).solution, p.chi);
        const double mh = mass(ph.alpha, hybrid_solve(ph, sp, &v).solution, p.chi);
        const double fd = (mh - ml) / (2.0 * h);
        expect(out, std::abs(mprime - fd) <= 1e-4 * std::abs(fd),
               "mass derivative mismatch with central difference");
    }
}

void check_lemma11_ordering(std::ostringstream& out) {
    SolverParams sp;
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 81);
    SemilinearProblem p;
    p.grid = &g;
    p.chi = 1.0;
    p.vstar = BoundaryValues::interval_ends(g, 1.0, 2.0);

    double prev_lower_mass = -1.0;
    Field prev_scaled;
    bool first = true;
    for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
        p.alpha = alpha;
        const Field v = hybrid_solve(p, sp).solution;
        const SolveReport lower = lower_solution(g, alpha, p.chi, p.vstar.min(), sp);
        for (int i = 0; i < g.num_nodes; ++i)
            expect(out, lower.solution[i] <= v[i] + 1e-9, "lower solution exceeds solution");

        Field scaled(g);
        for (int i = 0; i < g.num_nodes; ++i)
            scaled[i] = alpha * std::pow(lower.solution[i], p.chi);
        if (!first)
            for (int i = 0; i < g.num_nodes; ++i)
                expect(out, prev_scaled[i] <= scaled[i] + 1e-9,
                       "alpha v_lower^chi ordering broken");
        const double ml = mass(alpha, lower.solution, p.chi);
        expect(out, ml >= prev_lower_mass - 1e-10, "lower mass decreased");
        prev_scaled = std::move(scaled);
        prev_lower_mass = ml;
        first = false;
    }
}

void check_lemma13_subsolution(std::ostringstream& out) {
    const Grid g = build_grid(GeometrySpec::make_radial(3, 1.0, 0.0), 41);
    const SubsolutionParams sp = subsolution_params(4.0, 1.0, 1.0, 1.0);
    expect(out, sp.beta == 2.0 && sp.gamma == 4.0, "beta, gamma formulas broken");
    const Field z = subsolution_field(g, 4.0, 1.0, 1.0, 1.0);
    for (int i = 0; i < g.num_nodes; ++i) {
        const double r = g.coord_x[static_cast<size_t>(i)];
        expect(out, std::abs(z[i] - 4.0 * r * r) <= 1e-13, "subsolution is not 4 r^2");
    }
    expect(out, z[g.num_nodes - 1] == 4.0, "boundary value of the subsolution is not exact");
}

void check_lemma14_comparison(std::ostringstream& out, const SelftestOptions& opts) {
    SolverParams sp;
    const double chi = 1.0, vstar_min = 1.0, R = 1.0;
    const double chi_for_scaling = opts.fault_flip_chi_sign ? -chi : chi;
    for (int d : {2, 3}) {
        const Grid g = build_grid(GeometrySpec::make_radial(d, R, 0.0), 101);
        for (double alpha : {1.0, 4.0, 16.0}) {
            const SolveReport lower = lower_solution(g, alpha, chi, vstar_min, sp);
            const Field zbar = subsolution_field(g, alpha, chi, vstar_min, R);
            for (int i = 0; i < g.num_nodes; ++i) {
                const double z = std::pow(alpha, 1.0 / chi_for_scaling) * lower.solution[i];
                expect(out, z >= zbar[i] - 1e-8, "rescaled lower solution dips below the "
                                                 "explicit subsolution");
            }
        }
    }
}

void check_lemma15_sector(std::ostringstream& out) {
    SolverParams sp;
    for (int d : {2, 3}) {
        const Grid g = build_grid(GeometrySpec::make_radial(d, 1.0, 0.0), 201);
        const SectorSpec sector = SectorSpec::full_shell(d, 1.0);
        double prev_m = -1.0, prev_ml = -1.0, prev_sb = -1.0;
        for (double alpha : {1.0, 10.0, 100.0}) {
            SemilinearProblem p;
            p.grid = &g;
            p.alpha = alpha;
            p.chi = 1.0;
            p.vstar = BoundaryValues::constant(g, 1.0);
            const Field v = hybrid_solve(p, sp).solution;
            const double m = mass(alpha, v, p.chi);
            const double ml = mass(alpha, lower_solution(g, alpha, p.chi, 1.0, sp).solution,
                                   p.chi);
            const double sb = sector_lower_bound(sector, alpha, p.chi, 1.0);
            expect(out, m >= ml - 1e-9, "m < lower mass");
            expect(out, ml >= sb - 1e-8, "lower mass < sector bound");
            expect(out, m > prev_m && ml > prev_ml && sb > prev_sb,
                   "sector chain not strictly increasing");
            prev_m = m;
            prev_ml = ml;
            prev_sb = sb;
        }
    }
}

void check_lemma16_divergence(std::ostringstream& out) {
    SolverParams sp;
    const Grid grids[3] = {build_grid(GeometrySpec::make_interval(0.0, 1.0), 51),
                           build_grid(GeometrySpec::make_rectangle(1.0, 1.0), 21),
                           build_grid(GeometrySpec::make_radial(3, 1.0, 0.0), 51)};
    for (const Grid& g : grids) {
        SemilinearProblem p;
        p.grid = &g;
        p.chi = 1.0;
        p.vstar = BoundaryValues::constant(g, 1.0);
        double prev = -1.0;
        const Field* warm = nullptr;
        Field cache;
        for (int k = 0; k <= 6; ++k) {
            p.alpha = std::pow(10.0, k);
            cache = hybrid_solve(p, sp, warm).solution;
            warm = &cache;
            const double m = mass(p.alpha, cache, p.chi);
            expect(out, m > prev, "mass map stopped increasing");
            if (k > 0)
                expect(out, m >= 2.0 * prev, "mass map flattening toward a plateau");
            prev = m;
        }
    }
}

void check_lemma10_roundtrip(std::ostringstream& out) {
    SolverParams sp;
    MassParams mp;
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 101);
    SemilinearProblem tpl;
    tpl.grid = &g;
    tpl.chi = 1.0;
    tpl.vstar = BoundaryValues::constant(g, 1.0);
    for (double alpha : {0.1, 1.0, 10.0}) {
        tpl.alpha = alpha;
        const Field v = hybrid_solve(tpl, sp).solution;
        const double m = mass(alpha, v, tpl.chi);
        const InversionResult inv = invert_mass(m, tpl, mp, sp);
        expect(out, std::abs(inv.alpha - alpha) <= 1e-6 * alpha,
               "mass inversion does not invert the forward map");
    }
}

void check_theorem1_roundtrip(std::ostringstream& out) {
    SolverParams sp;
    MassParams mp;
    for (const Grid& g : standard_grids(61, 31)) {
        const double m = 0.7;
        const SteadyState st = compute_steady_state(g, 1.0, BoundaryValues::constant(g, 1.0),
                                                    m, mp, sp);
        expect(out, std::abs(st.achieved_mass - m) <= 1e-8 * m, "achieved mass off target");
        expect(out, st.u.min() > 0.0 && st.v.min() > 0.0, "state not positive");
        expect(out, st.alpha > 0.0, "alpha and mass signs must coincide");
    }
}

void check_lemma1_flux(std::ostringstream& out) {
    SolverParams sp;
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 201);
    const SteadyState st = compute_steady_state_for_alpha(
        g, 1.0, BoundaryValues::constant(g, 1.0), 2.0, sp);
    expect(out, st.flux_interior_norm <= 1e-3 && st.flux_boundary_norm <= 1e-3,
           "flux residual of the reduced state too large");

    // perturbation detector
    Field u_bad = st.u;
    for (int i = 0; i < g.num_nodes; ++i)
        u_bad[i] += 0.1 * std::sin(3.14159 * g.coord_x[static_cast<size_t>(i)]);
    const auto [fi_bad, fb_bad] = flux_residual(u_bad, st.v, 1.0);
    expect(out, fi_bad >= 10.0 * st.flux_interior_norm,
           "flux residual misses an injected perturbation");
    (void)fb_bad;
}

void check_uniqueness(std::ostringstream& out) {
    SolverParams sp;
    for (const Grid& g : standard_grids(41, 21)) {
        SemilinearProblem p;
        p.grid = &g;
        p.alpha = 3.0;
        p.chi = 1.0;
        p.vstar = BoundaryValues::constant(g, 1.0);
        const Field v_picard = picard_solve(p, sp).solution;
        const Field v_hybrid = hybrid_solve(p, sp).solution;
        const Field v_newton = newton_solve(p, sp, harmonic_extension(g, p.vstar)).solution;
        expect(out, max_abs_diff(v_picard, v_hybrid) <= 1e-8,
               "fixed point and hybrid disagree");
        expect(out, max_abs_diff(v_picard, v_newton) <= 1e-9,
               "fixed point and Newton disagree");
    }
}

void check_evolution_conservation(std::ostringstream& out) {
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 101);
    const BoundaryValues bc = BoundaryValues::constant(g, 1.0);
    Field u0(g, 0.7);
    Field v0 = harmonic_extension(g, bc);
    EvolutionState s = EvolutionState::start(std::move(u0), std::move(v0));
    const double m0 = integrate(s.u);
    for (int k = 0; k < 50; ++k) {
        s = step(s, 2e-4, 1.0, bc);
        expect(out, s.mass_drift <= 1e-12 * m0, "per-step mass drift too large");
        expect(out, s.v.max() <= 1.0 + 1e-10, "signal maximum principle broken");
        expect(out, s.v.min() > 0.0, "signal lost positivity");
    }
}

void check_equilibrium_persistence(std::ostringstream& out) {
    SolverParams sp;
    MassParams mp;
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 101);
    const BoundaryValues bc = BoundaryValues::constant(g, 1.0);
    const SteadyState st = compute_steady_state(g, 1.0, bc, 0.7, mp, sp);
    EvolutionState s = EvolutionState::start(st.u, st.v);
    for (int k = 0; k < 200; ++k) s = step(s, 1e-3, 1.0, bc);
    expect(out, max_abs_diff(s.u, st.u) <= 1e-6, "u drifted off the steady state");
    expect(out, max_abs_diff(s.v, st.v) <= 1e-6, "v drifted off the steady state");
}

} // namespace

std::vector<CheckResult> run_selftest_checks(const SelftestOptions& options) {
    Suite suite;
    suite.run("grid-quadrature", check_grid_quadrature);
    suite.run("gradient-constant", check_gradient_constant);
    suite.run("divergence-theorem", check_divergence_theorem);
    suite.run("maximum-principle", check_maximum_principle);
    suite.run("operator-symmetry", check_operator_symmetry);
    suite.run("lemma3-bound", check_lemma3_bound);
    suite.run("lemma4-monotonicity", check_lemma4_monotonicity);
    suite.run("lemma6-lower-bound", check_lemma6_lower_bound);
    suite.run("lemma9-sign", check_lemma9_sign);
    suite.run("eq38-residual", check_eq38_residual);
    suite.run("lemma10-derivative", check_lemma10_derivative);
    suite.run("lemma11-ordering", check_lemma11_ordering);
    suite.run("lemma13-subsolution", check_lemma13_subsolution);
    suite.run("lemma14-comparison",
              [&](std::ostringstream& out) { check_lemma14_comparison(out, options); });
    suite.run("lemma15-sector", check_lemma15_sector);
    suite.run("lemma16-divergence", check_lemma16_divergence);
    suite.run("lemma10-roundtrip", check_lemma10_roundtrip);
    suite.run("theorem1-roundtrip", check_theorem1_roundtrip);
    suite.run("lemma1-flux", check_lemma1_flux);
    suite.run("uniqueness", check_uniqueness);
    suite.run("evolution-conservation", check_evolution_conservation);
    suite.run("equilibrium-persistence", check_equilibrium_persistence);
    return suite.results;
}

bool run_selftest(std::ostream& out, const SelftestOptions& options) {
    const std::vector<CheckResult> results = run_selftest_checks(options);
    int passed = 0;
    for (const CheckResult& r : results) {
        out << r.name << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
        if (!r.pass && !r.detail.empty()) out << "  " << r.detail << "\n";
        if (r.pass) ++passed;
    }
    out << "selftest: " << passed << "/" << results.size() << " checks passed\n";
    return passed == static_cast<int>(results.size());
}

} // namespace ccs
