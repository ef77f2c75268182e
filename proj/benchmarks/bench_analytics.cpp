#include <benchmark/benchmark.h>

#include "densemimo/analytics.hpp"

using namespace densemimo;

static void BM_MuCoefficients(benchmark::State& state) {
  const auto model = make_dual_slope_default();
  double lambda = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu_coefficients(model, lambda));
    lambda = lambda < 1e4 ? lambda * 1.5 : 0.01;
  }
}
BENCHMARK(BM_MuCoefficients);

static void BM_OptimalZetaExhaustive(benchmark::State& state) {
  const auto model = make_dual_slope_default();
  NetworkParams p;
  p.lambda_km2 = 50.0;
  const auto mu = mu_coefficients(model, p.lambda_km2);
  const auto grid = default_zeta_grid(p.k, p.tau_c);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_zeta_exhaustive(mu, p, Scheme::kZF, grid));
}
BENCHMARK(BM_OptimalZetaExhaustive);
