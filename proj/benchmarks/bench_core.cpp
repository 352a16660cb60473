#include <benchmark/benchmark.h>

#include "tccross/model.hpp"
#include "tccross/observables.hpp"
#include "tccross/sweep.hpp"
#include "tccross/tridiag.hpp"
#include "tccross/variational.hpp"

namespace {

// Saturated manifold of a detuned model: dim = n_emitters + 1.
tc::TridiagonalBlock block_of_dim(int dim) {
    tc::ModelParams p{.omega_c = 1.0, .detuning = 3.0, .coupling = 1.0,
                      .n_emitters = dim - 1};
    return tc::hamiltonian_block(p, dim - 1);
}

void BM_GroundEigenpair(benchmark::State& state) {
    const tc::TridiagonalBlock block = block_of_dim(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(tc::ground_eigenpair(block));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GroundEigenpair)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void BM_AllEigenvalues(benchmark::State& state) {
    const tc::TridiagonalBlock block = block_of_dim(256);
    for (auto _ : state)
        benchmark::DoNotOptimize(tc::all_eigenvalues(block));
}
BENCHMARK(BM_AllEigenvalues);

void BM_AssembleRecord(benchmark::State& state) {
    const tc::ModelParams p{.omega_c = 1.0, .detuning = 3.0, .coupling = 1.0,
                            .n_emitters = 1000};
    const tc::GroundState gs = tc::ground_state(p, 1000);  // dim 1001
    for (auto _ : state)
        benchmark::DoNotOptimize(tc::assemble_record(p, gs));
}
BENCHMARK(BM_AssembleRecord);

void BM_SolveVariational(benchmark::State& state) {
    const tc::ModelParams p{.omega_c = 1.0, .detuning = 3.0, .coupling = 1.0,
                            .n_emitters = 1000};
    const double rho = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(tc::solve_variational(p, rho));
}
BENCHMARK(BM_SolveVariational)->Arg(2)->Arg(8);  // condensed and saturated

void BM_ExactSweep(benchmark::State& state) {
    tc::SweepConfig cfg;
    cfg.params = {.omega_c = 1.0, .detuning = 3.0, .coupling = 1.0,
                  .n_emitters = 200};
    cfg.nu_min = 0;
    cfg.nu_max = 600;
    cfg.threads = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(tc::run_exact_sweep(cfg));
}
BENCHMARK(BM_ExactSweep)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
