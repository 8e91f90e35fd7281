#include <benchmark/benchmark.h>

#include "ccs/semilinear.hpp"

namespace {

void BM_hybrid_interval(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ccs::Grid grid = ccs::build_grid(ccs::GeometrySpec::make_interval(0.0, 1.0), n);
    ccs::SemilinearProblem p;
    p.grid = &grid;
    p.alpha = 4.0;
    p.chi = 1.0;
    p.vstar = ccs::BoundaryValues::constant(grid, 1.0);
    const ccs::SolverParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ccs::hybrid_solve(p, params));
    }
}
BENCHMARK(BM_hybrid_interval)->Arg(101)->Arg(401)->Arg(2001);

void BM_hybrid_rectangle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ccs::Grid grid = ccs::build_grid(ccs::GeometrySpec::make_rectangle(1.0, 1.0), n);
    ccs::SemilinearProblem p;
    p.grid = &grid;
    p.alpha = 4.0;
    p.chi = 1.0;
    p.vstar = ccs::BoundaryValues::constant(grid, 1.0);
    const ccs::SolverParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ccs::hybrid_solve(p, params));
    }
}
BENCHMARK(BM_hybrid_rectangle)->Arg(33)->Arg(65)->Arg(101);

void BM_hybrid_radial(benchmark::State& state) {
    const double alpha = static_cast<double>(state.range(0));
    const ccs::Grid grid = ccs::build_grid(ccs::GeometrySpec::make_radial(3, 1.0, 0.0), 201);
    ccs::SemilinearProblem p;
    p.grid = &grid;
    p.alpha = alpha;
    p.chi = 1.0;
    p.vstar = ccs::BoundaryValues::constant(grid, 1.0);
    const ccs::SolverParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ccs::hybrid_solve(p, params));
    }
}
BENCHMARK(BM_hybrid_radial)->Arg(1)->Arg(100)->Arg(10000);

} // namespace
