// Serial vs OpenMP evaluation of a batch of random configurations.
#include <benchmark/benchmark.h>

#include "adjprof/generator.hpp"
#include "adjprof/optimizer.hpp"

namespace {

struct Fixture {
  adjprof::CallTree tree;
  std::vector<adjprof::CheckpointConfig> configs;
};

const Fixture& fixture(int calls) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(calls);
  if (it == cache.end()) {
    adjprof::CostRanges ranges;
    ranges.loop_probability = 0.2;
    Fixture f;
    f.tree = adjprof::generate_tree(7, calls, 4, ranges);
    f.configs = adjprof::sample_configs(f.tree, 256, 11);
    it = cache.emplace(calls, std::move(f)).first;
  }
  return it->second;
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(adjprof::evaluate_configs_serial(f.tree, f.configs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.configs.size()));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(adjprof::evaluate_configs(f.tree, f.configs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.configs.size()));
}

BENCHMARK(BM_EvaluateSerial)->Arg(20)->Arg(85)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateParallel)->Arg(20)->Arg(85)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
