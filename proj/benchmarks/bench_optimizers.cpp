#include <benchmark/benchmark.h>

#include "osc/baselines.hpp"
#include "osc/search_tree.hpp"

namespace {

constexpr osc::NoiseModel kNoise{0.05, 1.0};

osc::ConfidenceSchedule schedule() {
  osc::ConfidenceSchedule s;
  s.c = 0.1;
  return s;
}

// Time per round for a run of state.range(0) rounds on Garland.
void BM_SearchTree(benchmark::State& state, osc::Algorithm algo) {
  const auto objective = osc::make_garland();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    osc::SearchTree tree(algo, objective.domain, osc::SmoothnessFn::exponential(1.0, 0.75),
                         schedule());
    osc::Rng rng(1, osc::Stream::noise);
    for (std::uint64_t t = 0; t < n; ++t) benchmark::DoNotOptimize(tree.step(objective, kNoise, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_SearchTree, vhct, osc::Algorithm::vhct)->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK_CAPTURE(BM_SearchTree, hct, osc::Algorithm::hct)->Arg(1 << 10)->Arg(1 << 14);

void BM_TruncatedHoo(benchmark::State& state) {
  const auto objective = osc::make_garland();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    osc::TruncatedHoo hoo(objective.domain, osc::SmoothnessFn::exponential(1.0, 0.75), schedule());
    osc::Rng rng(1, osc::Stream::noise);
    for (std::uint64_t t = 0; t < n; ++t) benchmark::DoNotOptimize(hoo.step(objective, kNoise, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TruncatedHoo)->Arg(1 << 10)->Arg(1 << 14);

void BM_Rastrigin10d(benchmark::State& state) {
  const auto objective = osc::make_rastrigin(10);
  for (auto _ : state) {
    osc::SearchTree tree(osc::Algorithm::vhct, objective.domain,
                         osc::SmoothnessFn::exponential(1.0, 0.75), schedule());
    osc::Rng rng(1, osc::Stream::noise);
    for (int t = 0; t < 4096; ++t) benchmark::DoNotOptimize(tree.step(objective, kNoise, rng));
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_Rastrigin10d);

}  // namespace
BENCHMARK_MAIN();
