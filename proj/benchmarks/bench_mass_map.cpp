#include <benchmark/benchmark.h>

#include "ccs/mass_map.hpp"

namespace {

void BM_invert_mass(benchmark::State& state) {
    const ccs::Grid grid = ccs::build_grid(ccs::GeometrySpec::make_interval(0.0, 1.0),
                                           static_cast<int>(state.range(0)));
    ccs::SemilinearProblem tpl;
    tpl.grid = &grid;
    tpl.chi = 1.0;
    tpl.vstar = ccs::BoundaryValues::constant(grid, 1.0);
    const ccs::SolverParams sp;
    const ccs::MassParams mp;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ccs::invert_mass(0.7, tpl, mp, sp));
    }
}
BENCHMARK(BM_invert_mass)->Arg(101)->Arg(401);

void BM_mass_sweep_decade(benchmark::State& state) {
    const ccs::Grid grid = ccs::build_grid(ccs::GeometrySpec::make_radial(3, 1.0, 0.0), 201);
    ccs::SemilinearProblem tpl;
    tpl.grid = &grid;
    tpl.chi = 1.0;
    tpl.vstar = ccs::BoundaryValues::constant(grid, 1.0);
    const ccs::SolverParams sp;
    const std::vector<double> alphas{1.0, 10.0, 100.0, 1000.0};
    const auto sector = ccs::SectorSpec::full_shell(3, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ccs::mass_sweep(tpl, alphas, sp, sector));
    }
}
BENCHMARK(BM_mass_sweep_decade);

} // namespace
