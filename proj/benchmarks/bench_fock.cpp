#include <benchmark/benchmark.h>

#include "hops/fock.hpp"
#include "hops/polarization.hpp"

using namespace hops;

static void BM_ModeOperator(benchmark::State& state) {
  const FockSpace sp = make_fock_space(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mode_operator(sp, Mode::X, LadderKind::Annihilate));
  }
  state.SetComplexityN(sp.dim());
}
BENCHMARK(BM_ModeOperator)->Arg(8)->Arg(16)->Arg(24)->Arg(32)->Complexity();

static void BM_CoherentState(benchmark::State& state) {
  const FockSpace sp = make_fock_space(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coherent_state(sp, Complex(1.0, 0.5), Complex(0.3, -0.2)));
  }
}
BENCHMARK(BM_CoherentState)->Arg(16)->Arg(24)->Arg(32);

static void BM_ExpectationVariance(benchmark::State& state) {
  const FockSpace sp = make_fock_space(static_cast<int>(state.range(0)));
  const OperatorQuad h = hidden_operators(sp, 0.0);
  const StateVector psi = coherent_state(sp, 1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expectation(psi, h.o2));
    benchmark::DoNotOptimize(variance(psi, h.o2));
  }
}
BENCHMARK(BM_ExpectationVariance)->Arg(16)->Arg(24)->Arg(32);

static void BM_EvolverSetup(benchmark::State& state) {
  const FockSpace sp = make_fock_space(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    PairEvolver evolver(sp);
    benchmark::DoNotOptimize(&evolver);
  }
}
BENCHMARK(BM_EvolverSetup)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_EvolveDense(benchmark::State& state) {
  const FockSpace sp = make_fock_space(static_cast<int>(state.range(0)));
  const PairEvolver evolver(sp);
  const StateVector psi = coherent_state(sp, 0.5, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolver.evolve(psi, 2.0, 0.15));
  }
}
BENCHMARK(BM_EvolveDense)->Arg(16)->Arg(24)->Arg(30);

static void BM_EvolveLanczos(benchmark::State& state) {
  const FockSpace sp = make_fock_space(static_cast<int>(state.range(0)));
  const PairEvolver evolver(sp);
  const StateVector psi = coherent_state(sp, 0.5, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        evolver.evolve(psi, 2.0, 0.15, PairEvolver::Method::Lanczos));
  }
}
BENCHMARK(BM_EvolveLanczos)->Arg(24)->Arg(40);

static void BM_GlauberGamma(benchmark::State& state) {
  const FockSpace sp = make_fock_space(16);
  const StateVector psi = coherent_state(sp, Complex(0.8, 0.1), Complex(0.4, 0.3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(glauber_gamma(psi, 2, 1, 1, 2));
  }
}
BENCHMARK(BM_GlauberGamma);

BENCHMARK_MAIN();
