#include <benchmark/benchmark.h>

#include "hops/moments.hpp"
#include "hops/sweep.hpp"

using namespace hops;

static void BM_ClosedFormRow(benchmark::State& state) {
  const HopsInput inp{1.0, 1.0, 0.7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hidden_moments(inp, 0.25));
    benchmark::DoNotOptimize(hidden_variances(inp, 0.25, VarianceSource::ClosedForm));
    benchmark::DoNotOptimize(squeezing_function(inp, 0.25));
    benchmark::DoNotOptimize(degree_hidden(inp, 0.25));
    benchmark::DoNotOptimize(critical_time(inp, 1.0));
  }
}
BENCHMARK(BM_ClosedFormRow);

static void BM_OnsetBisection(benchmark::State& state) {
  const HopsInput inp{1.0, 1.0, 0.7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(onset_time_numeric(inp, 1.0));
  }
}
BENCHMARK(BM_OnsetBisection);

static void BM_SweepClosedGrid(benchmark::State& state) {
  SweepConfig config;
  config.kt_steps = 20;
  config.delta_steps = 36;
  config.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sweep(config));
  }
}
BENCHMARK(BM_SweepClosedGrid)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_SweepOracleGrid(benchmark::State& state) {
  SweepConfig config;
  config.ax_sq = 0.5;
  config.kt_max = 0.25;
  config.kt_steps = 4;
  config.delta_steps = 8;
  config.oracle = true;
  config.n_max = 16;
  config.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sweep(config));
  }
}
BENCHMARK(BM_SweepOracleGrid)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_OracleMoments(benchmark::State& state) {
  MomentOracle oracle(make_fock_space(static_cast<int>(state.range(0))));
  const HopsInput inp{0.5, 1.0, 0.7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.moments(inp, 0.25));
  }
}
BENCHMARK(BM_OracleMoments)->Arg(20)->Arg(24);

BENCHMARK_MAIN();
