#include <doctest.h>

#include <cmath>
#include <random>

#include "ccs/evolution.hpp"
#include "ccs/steady_state.hpp"

using namespace ccs;

TEST_CASE("flat equilibrium: no cells, constant signal, state unchanged") {
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 51);
    const BoundaryValues bc = BoundaryValues::constant(g, 1.5);
    EvolutionState s = EvolutionState::start(Field(g, 0.0), Field(g, 1.5));
    s = step(s, 1e-3, 1.0, bc);
    for (int i = 0; i < g.num_nodes; ++i) {
        CHECK(s.u[i] == 0.0);
        CHECK(s.v[i] == doctest::Approx(1.5).epsilon(1e-14));
    }
}

TEST_CASE("per-step mass conservation on every geometry") {
    std::mt19937 rng(4711);
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    for (const GeometrySpec spec :
         {GeometrySpec::make_interval(0.0, 1.0), GeometrySpec::make_rectangle(1.0, 1.0),
          GeometrySpec::make_radial(3, 1.0, 0.0)}) {
        const Grid g = build_grid(spec, spec.kind == GeometryKind::rectangle ? 21 : 101);
        const BoundaryValues bc = BoundaryValues::constant(g, 1.0);
        Field u0(g), v0(g);
        for (int i = 0; i < g.num_nodes; ++i) {
            u0[i] = unif(rng);
            v0[i] = 0.5 + 0.5 * unif(rng);
        }
        for (int node : g.boundary_nodes) v0[node] = 1.0;
        EvolutionState s = EvolutionState::start(std::move(u0), std::move(v0));
        const double m0 = integrate(s.u);
        const double h = g.spacing[0];
        for (int k = 0; k < 20; ++k) {
            s = step(s, 0.25 * h * h, 1.0, bc);
            CHECK(s.mass_drift <= 1e-12 * m0);
        }
    }
}

TEST_CASE("signal maximum principle under consumption") {
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 101);
    const BoundaryValues bc = BoundaryValues::constant(g, 1.0);
    Field v0(g, 1.0);
    for (int i = 0; i < g.num_nodes; ++i) {
        const double x = g.coord_x[static_cast<size_t>(i)];
        v0[i] = 1.0 + 0.5 * std::sin(3.0 * x) * x * (1.0 - x); // bounded by 1.2ish
    }
    const double v0max = v0.max();
    EvolutionState s = EvolutionState::start(Field(g, 0.5), std::move(v0));
    for (int k = 0; k < 100; ++k) {
        s = step(s, 1e-4, 1.0, bc);
        CHECK(s.v.max() <= std::max(v0max, 1.0) + 1e-10);
        CHECK(s.v.min() > 0.0);
    }
}

TEST_CASE("computed steady states persist under time stepping") {
    const SolverParams sp;
    const MassParams mp;
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 101);
    const BoundaryValues bc = BoundaryValues::constant(g, 1.0);
    const SteadyState st = compute_steady_state(g, 1.0, bc, 0.7, mp, sp);
    EvolutionState s = EvolutionState::start(st.u, st.v);
    for (int k = 0; k < 300; ++k) s = step(s, 1e-3, 1.0, bc);
    CHECK(max_abs_diff(s.u, st.u) <= 1e-6);
    CHECK(max_abs_diff(s.v, st.v) <= 1e-6);
}

TEST_CASE("evolve_to_steady stalls immediately when started at the state") {
    const SolverParams sp;
    const MassParams mp;
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 101);
    const BoundaryValues bc = BoundaryValues::constant(g, 1.0);
    const SteadyState st = compute_steady_state(g, 1.0, bc, 0.7, mp, sp);
    EvolutionParams ep;
    ep.dt = 1e-3;
    ep.stall_tol = 1e-6;
    const EvolutionTrace trace =
        evolve_to_steady(EvolutionState::start(st.u, st.v), 1.0, bc, 10.0, ep, &st.u, &st.v);
    CHECK(trace.stalled);
    CHECK(trace.final_state.steps == 1);
    CHECK(trace.dist_u.back() <= 1e-9);
}

TEST_CASE("relaxation toward the steady state from constant data") {
    const SolverParams sp;
    const MassParams mp;
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 101);
    const BoundaryValues bc = BoundaryValues::constant(g, 1.0);
    const SteadyState st = compute_steady_state(g, 1.0, bc, 0.7, mp, sp);

    EvolutionParams ep;
    ep.dt = 1e-4;
    ep.record_stride = 100;
    const EvolutionTrace trace =
        evolve_to_steady(EvolutionState::start(Field(g, 0.7), harmonic_extension(g, bc)), 1.0,
                         bc, 2.0, ep, &st.u, &st.v);
    CHECK(trace.final_state.time >= 2.0 - 1e-9);
    CHECK(trace.dist_u.back() < 0.05 * trace.dist_u.front());
    // mass of u preserved through the whole run
    CHECK(std::abs(trace.mass_u.back() - trace.mass_u.front()) <= 1e-10 * 0.7);
}

TEST_CASE("a hopeless dt is rejected with advice, cascade aborts") {
    const Grid g = build_grid(GeometrySpec::make_interval(0.0, 1.0), 51);
    const BoundaryValues bc = BoundaryValues::constant(g, 1.0);
    // consumption strong enough to push v negative in one explicit shot
    EvolutionState s = EvolutionState::start(Field(g, 50.0), Field(g, 1.0));
    CHECK_THROWS_AS((void)step(s, 0.5, 1.0, bc), StepRejectedError);
}
