#include <benchmark/benchmark.h>

#include "densemimo/specfun.hpp"

namespace sf = densemimo::specfun;

static void BM_UpperGammaRegularized(benchmark::State& state) {
  const double s = static_cast<double>(state.range(0)) / 4.0;
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf::upper_gamma_regularized(s, x));
    x = x < 50.0 ? x * 1.1 : 0.01;
  }
}
BENCHMARK(BM_UpperGammaRegularized)->Arg(2)->Arg(9)->Arg(40);

static void BM_LambertW0(benchmark::State& state) {
  double x = -0.36;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf::lambert_w0(x));
    x = x < 1e6 ? x + 7.3 : -0.36;
  }
}
BENCHMARK(BM_LambertW0);
