// Serial reference vs OpenMP kernels on the reference problem.
#include <benchmark/benchmark.h>

#include "gevlab/config.hpp"
#include "gevlab/operator_algebra.hpp"
#include "gevlab/radial.hpp"
#include "gevlab/solver.hpp"

#ifndef GEVLAB_CONFIG_DIR
#define GEVLAB_CONFIG_DIR "configs"
#endif

namespace {

using namespace gevlab;

const RunConfig& reference() {
    static const RunConfig cfg = load_config(std::string(GEVLAB_CONFIG_DIR) + "/reference.json");
    return cfg;
}

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_ConvolutionOperator(benchmark::State& st) {
    RadialGrid grid = RadialGrid::build(0.3, 12.0, 1.0, RadialGridSpec{});
    for (auto _ : st) {
        ConvolutionOperator op(grid, 0.5, 1.0, 2, exec_of(st));
        benchmark::DoNotOptimize(op.matrix().data());
    }
    st.counters["nodes"] = grid.size();
}
BENCHMARK(BM_ConvolutionOperator)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LaplaceWeights(benchmark::State& st) {
    RadialGrid grid = RadialGrid::build(0.0, 40.0, 1.0, RadialGridSpec{});
    std::vector<cplx> T;
    for (int i = 0; i < 256; ++i) T.push_back(std::polar(0.2 + 1.8 * i / 255.0, 0.1));
    for (auto _ : st) {
        auto w = laplace_weights_many(grid, 2, T, LaplaceSpec{}, exec_of(st));
        benchmark::DoNotOptimize(w.data());
    }
}
BENCHMARK(BM_LaplaceWeights)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AssembleSolution(benchmark::State& st) {
    const RunConfig& cfg = reference();
    SolverOptions opt = cfg.solver;
    opt.exec = exec_of(st);
    const Sector& s = cfg.geometry.covering[0];
    std::vector<EpsPoint> eps;
    for (double m : {0.1, 0.08, 0.06, 0.04}) eps.push_back(s.point(m, s.bisector()));
    std::vector<cplx> t{0.5, 1.0, 1.5, 2.0};
    for (auto _ : st) {
        SolutionField f = assemble_solution(cfg.problem, cfg.geometry, 0, eps, t, {0.0}, cfg.initial, opt);
        benchmark::DoNotOptimize(f.coeff.data());
    }
}
BENCHMARK(BM_AssembleSolution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
