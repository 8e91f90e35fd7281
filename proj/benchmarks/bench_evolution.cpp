#include <benchmark/benchmark.h>

#include "ccs/evolution.hpp"
#include "ccs/semilinear.hpp"

namespace {

void BM_imex_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ccs::Grid grid = ccs::build_grid(ccs::GeometrySpec::make_interval(0.0, 1.0), n);
    const ccs::BoundaryValues bc = ccs::BoundaryValues::constant(grid, 1.0);
    ccs::EvolutionState s = ccs::EvolutionState::start(ccs::Field(grid, 0.7),
                                                       ccs::harmonic_extension(grid, bc));
    const double dt = 0.25 * grid.spacing[0] * grid.spacing[0];
    for (auto _ : state) {
        s = ccs::step(s, dt, 1.0, bc);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_imex_step)->Arg(101)->Arg(1001);

void BM_imex_step_rectangle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ccs::Grid grid = ccs::build_grid(ccs::GeometrySpec::make_rectangle(1.0, 1.0), n);
    const ccs::BoundaryValues bc = ccs::BoundaryValues::constant(grid, 1.0);
    ccs::EvolutionState s = ccs::EvolutionState::start(ccs::Field(grid, 0.7),
                                                       ccs::harmonic_extension(grid, bc));
    const double h = grid.spacing[0];
    const double dt = 0.25 * h * h;
    for (auto _ : state) {
        s = ccs::step(s, dt, 1.0, bc);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_imex_step_rectangle)->Arg(33)->Arg(65);

} // namespace
