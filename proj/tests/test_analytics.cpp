#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "densemimo/analytics.hpp"
#include "densemimo/errors.hpp"
#include "oracles.hpp"

using namespace densemimo;

namespace {

NetworkParams scenario(double lambda, int m, int k, double zeta) {
  NetworkParams p;
  p.lambda_km2 = lambda;
  p.m = m;
  p.k = k;
  p.zeta = zeta;
  return p;
}

const oracle::Slopes kDual{{100.0}, {2.1, 4.0}, 8.3e-4};

}  // namespace

TEST(Mu, SingleSlopeLimitsIndependentOfDensity) {
  for (double alpha : {2.5, 3.0, 4.0, 5.0}) {
    const auto m = PathLossModel::single_slope(alpha, 1e-3);
    for (int i = 0; i < 100; ++i) {
      const double lambda = 1e-2 * std::pow(1e6, i / 99.0);
      const auto mu = mu_coefficients(m, lambda);
      EXPECT_NEAR(mu.mu1, 2.0 / (alpha - 2.0), 1e-9) << alpha << " " << lambda;
      EXPECT_NEAR(mu.mu2, 1.0 / (alpha - 1.0), 1e-9) << alpha << " " << lambda;
    }
  }
}

TEST(Mu, DualSlopeMatchesDoubleIntegral) {
  const auto m = make_dual_slope_default();
  for (double lambda : {0.1, 10.0, 100.0, 3000.0}) {
    for (int kappa : {1, 2}) {
      const double ref = oracle::mu_double_integral(kDual, lambda, kappa);
      EXPECT_NEAR(mu_coefficient(m, lambda, kappa), ref, 1e-7 * std::max(1.0, ref)) << lambda << " " << kappa;
    }
  }
}

TEST(Mu, ThreeSlopeMatchesDoubleIntegral) {
  const oracle::Slopes s{{30.0, 300.0}, {2.3, 3.0, 4.5}, 2e-3};
  const auto m = PathLossModel::create({30.0, 300.0}, {2.3, 3.0, 4.5}, 2e-3);
  for (double lambda : {1.0, 2000.0}) {
    for (int kappa : {1, 2}) {
      const double ref = oracle::mu_double_integral(s, lambda, kappa);
      EXPECT_NEAR(mu_coefficient(m, lambda, kappa), ref, 1e-7 * std::max(1.0, ref)) << lambda << " " << kappa;
    }
  }
}

TEST(Mu, LowDensityEndpoint) {
  const auto mu = mu_coefficients(make_dual_slope_default(), 1e-2);
  EXPECT_NEAR(mu.mu1, 1.0, 1e-3);
  EXPECT_NEAR(mu.mu2, 1.0 / 3.0, 1e-3);
}

TEST(Mu, NonDecreasingInDensity) {
  const auto m = make_dual_slope_default();
  MuCoefficients prev = mu_coefficients(m, 1e-2);
  for (int i = 1; i < 200; ++i) {
    const double lambda = 1e-2 * std::pow(1e6, i / 199.0);
    const auto mu = mu_coefficients(m, lambda);
    EXPECT_GE(mu.mu1, prev.mu1 - 1e-12) << lambda;
    EXPECT_GE(mu.mu2, prev.mu2 - 1e-12) << lambda;
    EXPECT_LT(mu.mu2, mu.mu1);
    prev = mu;
  }
}

TEST(Mu, StaysWithinSlopeLimits) {
  const auto m = make_dual_slope_default();
  for (double lambda : {1e-2, 1.0, 100.0, 1e4, 1e6}) {
    const auto mu = mu_coefficients(m, lambda);
    EXPECT_GE(mu.mu1, 2.0 / (4.0 - 2.0) - 1e-9);
    EXPECT_LE(mu.mu1, 2.0 / (2.1 - 2.0));
    EXPECT_GE(mu.mu2, 1.0 / 3.0 - 1e-9);
    EXPECT_LE(mu.mu2, 1.0 / 1.1);
  }
}

TEST(Mu, SingularAndDivergentSlopes) {
  const auto singular = PathLossModel::create({100.0}, {2.0, 4.0}, 1e-3);
  EXPECT_THROW((void)mu_coefficient(singular, 10.0, 1), SingularityError);
  const auto near_singular = PathLossModel::create({100.0}, {1.0, 4.0}, 1e-3);
  EXPECT_THROW((void)mu_coefficient(near_singular, 10.0, 2), SingularityError);
  EXPECT_THROW((void)mu_coefficient(make_dual_slope_default(), 10.0, 3), DomainError);
  EXPECT_THROW((void)mu_coefficient(make_dual_slope_default(), 0.0, 1), DomainError);
}

TEST(BigA, HandValues) {
  const double snr = std::pow(10.0, 0.5);
  EXPECT_NEAR(big_a(1.0, scenario(10, 100, 10, 1)), 2.0 + 1.0 / (10.0 * snr), 1e-14);
  EXPECT_NEAR(big_a(1.0, scenario(10, 100, 10, 1)), 2.0316, 1e-4);
  EXPECT_NEAR(big_a(20.0, scenario(10, 100, 10, 4)), 6.0079, 1e-4);
}

TEST(NmseBound, HandValueAndOrdering) {
  EXPECT_NEAR(nmse_bound(MuCoefficients{1.0, 1.0 / 3.0}, scenario(10, 100, 10, 1)), 0.5078, 1e-4);
  const auto m = make_dual_slope_default();
  for (double lambda : {0.01, 1.0, 30.0, 300.0, 1e4}) {
    const double n1 = nmse_bound(m, scenario(lambda, 100, 10, 1));
    const double n2 = nmse_bound(m, scenario(lambda, 100, 10, 2));
    const double n4 = nmse_bound(m, scenario(lambda, 100, 10, 4));
    EXPECT_LE(n4, n2);
    EXPECT_LE(n2, n1);
    EXPECT_GE(n4, 0.0);
    EXPECT_LT(n1, 1.0);
  }
}

TEST(NmseBound, LowDensityEndpointMatchesSlopeTwoLimit) {
  const auto p = scenario(1e-2, 100, 10, 1);
  const double a = 1.0 + 1.0 + 1.0 / (10.0 * std::pow(10.0, 0.5));
  EXPECT_NEAR(nmse_bound(make_dual_slope_default(), p), 1.0 - 1.0 / a, 1e-6);
}

TEST(Sinr, MaximumRatioSingleSlopeTerms) {
  const MuCoefficients mu{1.0, 1.0 / 3.0};
  const auto b = sinr_mr(mu, scenario(10, 100, 10, 1));
  const double a = 2.0 + 1.0 / (10.0 * std::pow(10.0, 0.5));
  EXPECT_NEAR(b.noise, a / (100.0 * std::pow(10.0, 0.5)), 1e-14);
  EXPECT_NEAR(b.intra_cell, 0.1 * a, 1e-14);
  EXPECT_NEAR(b.inter_cell, 0.1 * (a + 1.0 / 3.0), 1e-14);
  EXPECT_NEAR(b.pilot_contamination, 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(b.noise, 0.00642, 1e-5);
  EXPECT_NEAR(b.intra_cell, 0.20316, 1e-5);
  EXPECT_NEAR(b.inter_cell, 0.23650, 1e-5);
  EXPECT_NEAR(b.sinr, 1.283, 1e-3);
  EXPECT_NEAR(b.sinr, 1.0 / b.denominator(), 1e-15);
}

TEST(Sinr, ZeroForcingTerms) {
  const MuCoefficients mu{1.138, 0.391};
  const auto p = scenario(30, 64, 8, 2);
  const auto b = sinr_zf(mu, p);
  const double a = 1.0 + 1.138 / 2.0 + 1.0 / (16.0 * std::pow(10.0, 0.5));
  EXPECT_NEAR(b.noise, a / (56.0 * std::pow(10.0, 0.5)), 1e-14);
  EXPECT_NEAR(b.intra_cell, 8.0 / 56.0 * (a - 1.0), 1e-14);
  EXPECT_NEAR(b.inter_cell, 8.0 / 56.0 * a * 1.138, 1e-14);
  EXPECT_NEAR(b.pilot_contamination, 0.391 / 2.0, 1e-14);
  EXPECT_THROW((void)sinr_zf(mu, scenario(30, 8, 8, 2)), DegreesOfFreedomError);
}

TEST(Sinr, GrowsWithAntennasAndSaturates) {
  const auto m = make_dual_slope_default();
  for (Scheme s : {Scheme::kMR, Scheme::kZF}) {
    double prev = 0.0;
    for (int mk : {2, 5, 10, 50, 100, 1000}) {
      const double g = sinr(mu_coefficients(m, 30), scenario(30, 10 * mk, 10, 2), s).sinr;
      EXPECT_GT(g, prev);
      prev = g;
    }
    EXPECT_LT(prev, 2.0 / mu_coefficient(m, 30, 2));
  }
}

TEST(Sinr, LargeArrayLimit) {
  const auto m = make_dual_slope_default();
  for (double lambda : {1.0, 50.0, 300.0}) {
    const auto mu = mu_coefficients(m, lambda);
    for (Scheme s : {Scheme::kMR, Scheme::kZF}) {
      const double g = sinr(mu, scenario(lambda, 10'000'000, 10, 2), s).sinr;
      EXPECT_NEAR(g / (2.0 / mu.mu2), 1.0, 1e-3);
    }
  }
}

TEST(SpectralEfficiency, HandValues) {
  const MuCoefficients mu{1.0, 1.0 / 3.0};
  const auto p = scenario(10, 100, 10, 1);
  const double g = sinr_mr(mu, p).sinr;
  EXPECT_NEAR(se_lower_bound(mu, p, Scheme::kMR), 0.95 * std::log2(1.0 + g), 1e-14);
  EXPECT_NEAR(se_lower_bound(mu, p, Scheme::kMR), 1.131, 1e-3);
  EXPECT_NEAR(rate_asymptotic(1.0 / 3.0, 1.0, 10, 200.0), 1.9, 1e-12);
  EXPECT_NEAR(area_se(mu, p, Scheme::kMR), 10.0 * 10.0 * se_lower_bound(mu, p, Scheme::kMR), 1e-12);
}

TEST(SpectralEfficiency, AreaSeIsDensityTimesUsersTimesSe) {
  const MuCoefficients mu{1.3, 0.45};
  auto p = scenario(20, 200, 10, 1);
  const double ase10 = area_se(mu, p, Scheme::kZF);
  EXPECT_NEAR(ase10, 20.0 * 10.0 * se_lower_bound(mu, p, Scheme::kZF), 1e-12 * ase10);
  p.k = 20;
  const double ase20 = area_se(mu, p, Scheme::kZF);
  EXPECT_NEAR(ase20, 20.0 * 20.0 * se_lower_bound(mu, p, Scheme::kZF), 1e-12 * ase20);
}

TEST(OptimalZeta, WorkedExample) {
  const auto z = optimal_zeta_asymptotic(1.0 / 3.0, 10, 200.0);
  EXPECT_NEAR(z.unclamped, 5.04, 1e-2);
  EXPECT_NEAR(z.clamped, z.unclamped, 0.0);
  EXPECT_NEAR(z.unclamped, oracle::best_zeta(1.0 / 3.0, 10, 200.0), 1e-5);
}

TEST(OptimalZeta, MatchesGridSearchOnRandomCases) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> mu2(1.0 / 3.0, 0.9);
  std::uniform_int_distribution<int> k(5, 20);
  std::uniform_int_distribution<int> tau(100, 1000);
  for (int i = 0; i < 20; ++i) {
    const double m2 = mu2(rng);
    const int kk = k(rng);
    const double tc = tau(rng);
    const auto z = optimal_zeta_asymptotic(m2, kk, tc);
    EXPECT_NEAR(z.clamped, oracle::best_zeta(m2, kk, tc), 1e-3) << m2 << " " << kk << " " << tc;
  }
}

TEST(OptimalZeta, ClampsToFeasibleRange) {
  // Tiny coherence block: the stationary point falls below zeta = 1.
  const auto z = optimal_zeta_asymptotic(0.9, 20, 25.0);
  EXPECT_GE(z.clamped, 1.0);
  EXPECT_LE(z.clamped, 25.0 / 20.0);
}

TEST(OptimalZeta, ExhaustiveSearchPicksArgmax) {
  const MuCoefficients mu{1.3, 0.45};
  auto p = scenario(50, 100, 10, 1);
  const auto grid = default_zeta_grid(10, 200.0);
  ASSERT_EQ(grid.front(), 1.0);
  ASSERT_NEAR(grid.back(), 19.9, 1e-12);
  const double best = optimal_zeta_exhaustive(mu, p, Scheme::kMR, grid);
  double best_se = -1.0;
  double arg = 0.0;
  for (double z : grid) {
    p.zeta = z;
    const double se = se_lower_bound(mu, p, Scheme::kMR);
    if (se > best_se) {
      best_se = se;
      arg = z;
    }
  }
  EXPECT_EQ(best, arg);
  const std::vector<double> infeasible{0.5, 25.0};
  EXPECT_THROW((void)optimal_zeta_exhaustive(mu, p, Scheme::kMR, infeasible), ConfigError);
}

TEST(Crossover, SingleSlopeHandValues) {
  const MuCoefficients mu{1.0, 1.0 / 3.0};
  const auto p = scenario(10, 100, 10, 1);
  const double a = 2.0 + 1.0 / (10.0 * std::pow(10.0, 0.5));
  EXPECT_NEAR(crossover_antenna_ratio(mu, p, Scheme::kMR), (2.0 * a + 1.0 / 3.0) * 3.0, 1e-12);
  EXPECT_NEAR(crossover_antenna_ratio(mu, p, Scheme::kMR), 13.19, 1e-2);
  EXPECT_NEAR(crossover_antenna_ratio(mu, p, Scheme::kZF), 10.19, 1e-2);
}

TEST(Crossover, InterferenceEqualsContaminationAtCrossover) {
  const auto m = make_dual_slope_default();
  for (double lambda : {1.0, 30.0, 300.0}) {
    const auto mu = mu_coefficients(m, lambda);
    for (Scheme s : {Scheme::kMR, Scheme::kZF}) {
      auto p = scenario(lambda, 100, 10, 2);
      const double ratio = crossover_antenna_ratio(mu, p, s);
      // Check with a fractional antenna count through the closed-form terms.
      const double a = big_a(mu.mu1, p);
      const double mm = ratio * p.k;
      const double interference = s == Scheme::kMR ? p.k / mm * (a + a * mu.mu1 + mu.mu2 / p.zeta)
                                                   : p.k / (mm - p.k) * (a - 1.0 + a * mu.mu1);
      EXPECT_NEAR(interference, mu.mu2 / p.zeta, 1e-10);
    }
  }
}

TEST(NetworkParams, Validation) {
  EXPECT_THROW(scenario(0, 100, 10, 1).validate(), ConfigError);
  EXPECT_THROW(scenario(10, 100, 10, 0.5).validate(), ConfigError);
  EXPECT_THROW(scenario(10, 100, 0, 1).validate(), ConfigError);
  EXPECT_THROW(scenario(10, 0, 10, 1).validate(), ConfigError);
  EXPECT_THROW(scenario(10, 100, 10, 25).validate(), ConfigError);
  EXPECT_NO_THROW(scenario(10, 0, 10, 1).validate_without_m());
}

TEST(Scheme, Parsing) {
  EXPECT_EQ(parse_scheme("MR"), Scheme::kMR);
  EXPECT_EQ(parse_scheme("zf"), Scheme::kZF);
  EXPECT_THROW((void)parse_scheme("mmse"), ConfigError);
  EXPECT_EQ(to_string(Scheme::kZF), "ZF");
}
