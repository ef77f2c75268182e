#include <benchmark/benchmark.h>

#include <cstdint>

#include "densemimo/simulator.hpp"

using namespace densemimo;

static void BM_Realize(benchmark::State& state) {
  SimConfig cfg;
  cfg.target_bs_count = static_cast<double>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(realize(30.0, 1, 1, cfg, trial++));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Realize)->RangeMultiplier(4)->Range(100, 6400)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_EstimateMu(benchmark::State& state) {
  const auto model = make_dual_slope_default();
  SimConfig cfg;
  cfg.target_bs_count = 1000.0;
  cfg.trials = 16;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_mu(model, 30.0, cfg));
}
BENCHMARK(BM_EstimateMu)->Unit(benchmark::kMillisecond);
