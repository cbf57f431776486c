// OpenMP kernels against their serial references.
//   ./apnet_bench --benchmark_filter=Suite
// Set OMP_NUM_THREADS to compare thread counts.

#include "apnet/parallel.hpp"
#include "apnet/random.hpp"

#include <benchmark/benchmark.h>

using namespace apnet;

namespace {

void BM_PropertySuiteParallel(benchmark::State& state) {
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_property_suite(trials, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PropertySuiteSerial(benchmark::State& state) {
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_property_suite_serial(trials, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<Scenario> random_batch(std::size_t count) {
  std::vector<Scenario> batch;
  for (std::size_t k = 0; k < count; ++k) {
    auto rng = trial_rng(5, k);
    Scenario sc = random_constant_scenario(8, rng);
    sc.duration = 500 * sc.dt;
    batch.push_back(std::move(sc));
  }
  return batch;
}

void BM_IntegrateBatchParallel(benchmark::State& state) {
  const auto batch = random_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_batch(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_IntegrateBatchSerial(benchmark::State& state) {
  const auto batch = random_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_batch_serial(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_PropertySuiteParallel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PropertySuiteSerial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateBatchParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateBatchSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
