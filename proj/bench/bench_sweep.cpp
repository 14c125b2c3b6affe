// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "subadd/lab.hpp"
#include "subadd/random_models.hpp"

using namespace subadd;

namespace {

void BM_Sweep(benchmark::State& state) {
  const Axis axis = default_axis(Example::H1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep(Example::H1, axis, axis, Measure::wasserstein(1.0), DecompositionMode::Truncated));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
  const Axis axis = default_axis(Example::H1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sweep_serial(Example::H1, axis, axis, Measure::wasserstein(1.0), DecompositionMode::Truncated));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

BayesNet bench_net(int n) {
  Rng rng(7);
  const VariableSpace space(std::vector<int>(n, 2));
  return random_bayesnet(rng, space, random_dag(rng, n, 0.4, 3));
}

void BM_ExpandBayesNet(benchmark::State& state) {
  const BayesNet bn = bench_net(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(expand_bayesnet(bn));
}

void BM_ExpandBayesNetSerial(benchmark::State& state) {
  const BayesNet bn = bench_net(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(expand_bayesnet_serial(bn));
}

}  // namespace

BENCHMARK(BM_Sweep)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpandBayesNet)->Arg(12)->Arg(18)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExpandBayesNetSerial)->Arg(12)->Arg(18)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
