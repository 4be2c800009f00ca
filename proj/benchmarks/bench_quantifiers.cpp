#include <benchmark/benchmark.h>

#include "osc/partition.hpp"
#include "osc/quantifiers.hpp"

namespace {

void BM_TauClosedForm(benchmark::State& state) {
  const osc::ConfidenceSchedule s;
  double v = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(osc::tau_closed_form(0.1, s, v, 8.0));
    v = v < 0.2 ? v * 1.01 : 0.01;
  }
}
BENCHMARK(BM_TauClosedForm);

void BM_TauBruteforce(benchmark::State& state) {
  const osc::ConfidenceSchedule s;
  for (auto _ : state) {
    benchmark::DoNotOptimize(osc::tau_bruteforce(
        [&](std::uint64_t t) { return osc::se_vhct(s, 0.05, static_cast<double>(t), 8.0); }, 0.1));
  }
}
BENCHMARK(BM_TauBruteforce);

void BM_CellOf(benchmark::State& state) {
  const osc::Domain d(std::vector<double>(10, -5.12), std::vector<double>(10, 5.12));
  std::uint64_t i = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(osc::cell_of(d, {30, i}));
    i = i * 6364136223846793005ull % (1ull << 30) + 1;
  }
}
BENCHMARK(BM_CellOf);

}  // namespace
