#include <benchmark/benchmark.h>

#include "kreinval/cli_harness.hpp"

using namespace kreinval;

namespace {

// range(0): p, range(1): q
SuiteConfig bench_config(const benchmark::State& state) {
  SuiteConfig c;
  c.p = static_cast<int>(state.range(0));
  c.q = static_cast<int>(state.range(1));
  c.instances = 16;
  c.seed = 1;
  c.rayleigh_samples = 200;
  c.cf_subspaces = 100;
  c.ky_fan_frames = 50;
  c.wielandt_flags = 10;
  c.wielandt_frames = 10;
  return c;
}

void BM_SuiteSerial(benchmark::State& state) {
  const auto cfg = bench_config(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_suite_serial(cfg).failed_reports);
  state.SetItemsProcessed(state.iterations() * cfg.instances);
}

void BM_SuiteParallel(benchmark::State& state) {
  const auto cfg = bench_config(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(cfg).failed_reports);
  state.SetItemsProcessed(state.iterations() * cfg.instances);
}

}  // namespace

BENCHMARK(BM_SuiteSerial)->Args({2, 1})->Args({3, 2})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SuiteParallel)->Args({2, 1})->Args({3, 2})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
