#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "densemimo/analytics.hpp"
#include "densemimo/errors.hpp"
#include "densemimo/json_io.hpp"
#include "densemimo/simulator.hpp"

using namespace densemimo;

namespace {

SimConfig small_config(std::uint64_t trials, double bs_count = 200.0) {
  SimConfig c;
  c.trials = trials;
  c.target_bs_count = bs_count;
  c.master_seed = 2024;
  return c;
}

NetworkParams params_at(double lambda, double zeta, int k = 10) {
  NetworkParams p;
  p.lambda_km2 = lambda;
  p.zeta = zeta;
  p.k = k;
  return p;
}

}  // namespace

TEST(GenerateNetwork, PoissonMeanCount) {
  SimConfig c = small_config(1, 100.0);
  double sum = 0.0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) sum += static_cast<double>(generate_network(30.0, c, t).bs_positions.size());
  EXPECT_NEAR(sum / n, 100.0, 3.0 * std::sqrt(100.0 / n));
}

TEST(GenerateNetwork, Deterministic) {
  const SimConfig c = small_config(1);
  const auto a = generate_network(10.0, c, 17);
  const auto b = generate_network(10.0, c, 17);
  ASSERT_EQ(a.bs_positions.size(), b.bs_positions.size());
  for (std::size_t i = 0; i < a.bs_positions.size(); ++i) EXPECT_EQ(a.bs_positions[i], b.bs_positions[i]);
  const auto other = generate_network(10.0, c, 18);
  EXPECT_NE(other.bs_positions.front(), a.bs_positions.front());
}

TEST(GenerateNetwork, UniformOverEqualAreaCells) {
  // 4 equal-area rings x 4 quadrants; chi-square with 15 degrees of freedom.
  const SimConfig c = small_config(1, 200.0);
  std::array<double, 16> counts{};
  double total = 0.0;
  double radius = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto net = generate_network(5.0, c, t);
    radius = net.window_radius_m;
    for (const Point& p : net.bs_positions) {
      const double r2 = (p.x * p.x + p.y * p.y) / (radius * radius);
      const int ring = std::min(3, static_cast<int>(r2 * 4.0));
      const int quadrant = (p.x >= 0.0 ? 0 : 1) + (p.y >= 0.0 ? 0 : 2);
      counts[static_cast<std::size_t>(ring * 4 + quadrant)] += 1.0;
      total += 1.0;
    }
  }
  double chi2 = 0.0;
  for (double o : counts) chi2 += (o - total / 16.0) * (o - total / 16.0) / (total / 16.0);
  EXPECT_LT(chi2, 37.697);  // 0.999 quantile
}

TEST(GenerateNetwork, RejectsTinyWindow) {
  SimConfig c = small_config(1);
  c.window_radius_m = 100.0;
  EXPECT_THROW((void)generate_network(1.0, c, 0), ConfigError);
  EXPECT_THROW((void)generate_network(0.0, small_config(1), 0), ConfigError);
}

TEST(GenerateNetwork, AtLeastTwoStations) {
  SimConfig c = small_config(1);
  c.window_radius_m = std::sqrt(2.2 / (std::numbers::pi * 1e-6));  // expected count 2.2 at 1 BS/km^2
  std::uint64_t resampled = 0;
  for (int t = 0; t < 500; ++t) {
    const auto net = generate_network(1.0, c, t);
    EXPECT_GE(net.bs_positions.size(), 2u);
    resampled += net.count_resamples;
  }
  EXPECT_GT(resampled, 0u);
}

TEST(DropUes, TwoStationsSplitAlongBisector) {
  SimConfig c = small_config(1);
  for (int t = 0; t < 200; ++t) {
    NetworkRealization net;
    net.window_radius_m = 1000.0;
    net.bs_positions = {{-300.0, 0.0}, {300.0, 0.0}};
    drop_ues(net, 3, c, t);
    for (const Point& u : net.ue_positions[0]) EXPECT_LE(u.x, 0.0);
    for (const Point& u : net.ue_positions[1]) EXPECT_GE(u.x, 0.0);
    for (const auto& cell : net.ue_positions) {
      for (const Point& u : cell) EXPECT_LE(u.x * u.x + u.y * u.y, 1000.0 * 1000.0);
    }
  }
}

TEST(DropUes, EveryUeIsServedByItsNearestStation) {
  const SimConfig c = small_config(1, 300.0);
  for (int t = 0; t < 5; ++t) {
    const auto net = realize(50.0, 4, 0, c, t);
    for (std::size_t l = 0; l < net.bs_positions.size(); ++l) {
      ASSERT_EQ(net.ue_positions[l].size(), 4u);
      for (const Point& u : net.ue_positions[l]) {
        const double own = squared_distance(u, net.bs_positions[l]);
        for (const Point& b : net.bs_positions) EXPECT_LE(own, squared_distance(u, b));
      }
    }
  }
}

TEST(DropUes, MeanServingDistanceOfCenterCell) {
  // The cell holding the window center is area-biased; a UE uniform in it is distributed
  // like a uniform point of the plane, whose nearest-BS distance has mean 1 / (2 sqrt(lambda)).
  SimConfig c = small_config(1, 200.0);
  c.typical = TypicalSelection::kNearestCenter;
  const double lambda = 100.0;
  double sum = 0.0;
  int n = 0;
  for (int t = 0; t < 3000; ++t) {
    const auto net = realize(lambda, 4, 0, c, t);
    const auto typ = typical_indices(net, c);
    ASSERT_EQ(typ.size(), 1u);
    for (const Point& u : net.ue_positions[typ[0]]) {
      sum += distance(u, net.bs_positions[typ[0]]);
      ++n;
    }
  }
  const double expected_m = 1000.0 / (2.0 * std::sqrt(lambda));
  EXPECT_NEAR(sum / n, expected_m, 0.05 * expected_m);
}

TEST(DropUes, DeterministicLayout) {
  const SimConfig c = small_config(1);
  const auto a = realize(20.0, 2, 0, c, 3);
  const auto b = realize(20.0, 2, 0, c, 3);
  ASSERT_EQ(a.ue_positions.size(), b.ue_positions.size());
  for (std::size_t l = 0; l < a.ue_positions.size(); ++l) {
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(a.ue_positions[l][i], b.ue_positions[l][i]);
  }
}

TEST(DropUes, StallIsReported) {
  SimConfig c = small_config(1, 300.0);
  c.max_proposals = 1;
  auto net = generate_network(10.0, c, 0);
  EXPECT_THROW(drop_ues(net, 20, c, 0), SamplingStall);
}

TEST(Pilots, ExplicitBookGivesDistinctPilots) {
  const SimConfig c = small_config(1);
  const auto net = realize(10.0, 4, 6, c, 1);
  ASSERT_EQ(net.tau_p, 6);
  for (const auto& cell : net.pilot_index) {
    ASSERT_EQ(cell.size(), 4u);
    for (std::size_t i = 0; i < cell.size(); ++i) {
      EXPECT_GE(cell[i], 0);
      EXPECT_LT(cell[i], 6);
      for (std::size_t j = 0; j < i; ++j) EXPECT_NE(cell[i], cell[j]);
    }
  }
}

TEST(MeasureTypical, IsolatedStationWithoutNoiseIsPerfect) {
  NetworkRealization net;
  net.window_radius_m = 1000.0;
  net.bs_positions = {{0.0, 0.0}};
  net.ue_positions = {{{30.0, 40.0}}};
  auto p = params_at(10.0, 1.0);
  p.snr0_db = 300.0;
  Rng rng(1);
  const auto s = measure_typical(make_dual_slope_default(), net, 0, p, PilotMode::kBernoulli, rng);
  EXPECT_EQ(s.ratio_sum, 0.0);
  EXPECT_NEAR(s.nmse, 0.0, 1e-20);
}

TEST(MeasureTypical, SymmetricPairHasUnitRatioSum) {
  // Interfering UE exactly on the bisector: equal gains to both stations.
  NetworkRealization net;
  net.window_radius_m = 1000.0;
  net.bs_positions = {{-50.0, 0.0}, {50.0, 0.0}};
  net.ue_positions = {{{-50.0, 10.0}}, {{0.0, 30.0}}};
  const auto p = params_at(10.0, 1.0);
  Rng rng(1);
  const auto s = measure_typical(make_dual_slope_default(), net, 0, p, PilotMode::kBernoulli, rng);
  EXPECT_NEAR(s.ratio_sum, 1.0, 1e-12);
  EXPECT_NEAR(s.ratio_sq_sum, 1.0, 1e-12);
  EXPECT_NEAR(s.pilot_ratio_sum, 1.0, 1e-12);  // zeta = 1: always shared
  const double noise = 1.0 / (10.0 * std::pow(10.0, 0.5));
  EXPECT_NEAR(s.nmse, 1.0 - 1.0 / (2.0 + noise), 1e-12);
}

TEST(EstimateMu, DeterministicAcrossThreadCounts) {
  SimConfig c = small_config(40);
  c.threads = 1;
  const auto a = estimate_mu(make_dual_slope_default(), 30.0, c);
  c.threads = 3;
  const auto b = estimate_mu(make_dual_slope_default(), 30.0, c);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(to_json(a), to_json(estimate_mu(make_dual_slope_default(), 30.0, c)));
}

TEST(EstimateMu, EstimatesArePositiveAndFinite) {
  const auto s = estimate_mu(make_dual_slope_default(), 10.0, small_config(30));
  EXPECT_GT(s.mu1.mean, 0.0);
  EXPECT_GT(s.mu2.mean, 0.0);
  EXPECT_LT(s.mu2.mean, s.mu1.mean);
  EXPECT_TRUE(std::isfinite(s.mu1.std_error));
  EXPECT_GT(s.mu1.std_error, 0.0);
  EXPECT_GE(s.n_effective, 1u);
  EXPECT_EQ(s.realizations, 30u);
}

TEST(EstimateMu, NearestCenterModeUsesOneStationPerTrial) {
  SimConfig c = small_config(50);
  c.typical = TypicalSelection::kNearestCenter;
  const auto s = estimate_mu(make_dual_slope_default(), 10.0, c);
  EXPECT_EQ(s.n_effective + s.discarded, 50u);
  EXPECT_GT(s.n_effective, 40u);
}

TEST(EstimateMu, ConfidenceIntervalShrinksLikeInverseRoot) {
  const auto model = PathLossModel::single_slope(4.0);
  std::vector<double> widths;
  for (std::uint64_t trials : {1000u, 4000u, 16000u}) {
    SimConfig c = small_config(trials, 60.0);
    widths.push_back(estimate_mu(model, 50.0, c).mu1.ci_half_width);
  }
  EXPECT_NEAR(widths[0] / widths[1], 2.0, 0.4);
  EXPECT_NEAR(widths[1] / widths[2], 2.0, 0.4);
}

TEST(EstimateMu, GuardRadiusControlsEdgeEffects) {
  const auto model = make_dual_slope_default();
  SimConfig narrow = small_config(300);
  narrow.window_radius_m = 2000.0;
  narrow.guard_radius_m = 500.0;
  SimConfig wide = narrow;
  wide.window_radius_m = 4000.0;
  wide.master_seed = 99;
  const auto a = estimate_mu(model, 50.0, narrow);
  const auto b = estimate_mu(model, 50.0, wide);
  EXPECT_LT(std::abs(a.mu1.mean - b.mu1.mean), 2.0 * a.mu1.ci_half_width);
}

TEST(EstimateNmse, BelowBoundAndCloseToIt) {
  const auto model = make_dual_slope_default();
  const auto p = params_at(50.0, 2.0);
  const auto s = estimate_nmse(model, p, small_config(200));
  ASSERT_TRUE(s.nmse);
  const double bound = nmse_bound(model, p);
  EXPECT_LE(s.nmse->mean, bound + s.nmse->ci_half_width);
  EXPECT_NEAR(s.nmse->mean, bound, 0.15);
  EXPECT_GT(s.nmse->mean, 0.0);
}

TEST(EstimateNmse, LargerReuseLowersError) {
  const auto model = make_dual_slope_default();
  const auto one = estimate_nmse(model, params_at(30.0, 1.0), small_config(200));
  const auto four = estimate_nmse(model, params_at(30.0, 4.0), small_config(200));
  EXPECT_LT(four.nmse->mean, one.nmse->mean);
}

TEST(EstimateNmse, BernoulliAndExplicitBookAgree) {
  const auto model = make_dual_slope_default();
  const auto p = params_at(50.0, 2.0, 4);
  SimConfig bern = small_config(400);
  SimConfig book = bern;
  book.pilot_mode = PilotMode::kExplicitBook;
  book.master_seed = 5;
  const auto a = estimate_nmse(model, p, bern);
  const auto b = estimate_nmse(model, p, book);
  EXPECT_LE(std::abs(a.nmse->mean - b.nmse->mean), a.nmse->ci_half_width + b.nmse->ci_half_width);
}

TEST(EstimateNmse, ExplicitBookNeedsIntegerPilotCount) {
  SimConfig c = small_config(2);
  c.pilot_mode = PilotMode::kExplicitBook;
  EXPECT_THROW((void)estimate_nmse(make_dual_slope_default(), params_at(10.0, 1.25, 10), c), ConfigError);
  EXPECT_THROW((void)estimate_nmse(make_dual_slope_default(), params_at(10.0, 1.05, 10), c), ConfigError);
}

TEST(SimConfig, Validation) {
  SimConfig c;
  c.trials = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SimConfig{};
  c.window_radius_m = 1000.0;
  c.guard_radius_m = 600.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SimConfig{};
  c.fading_samples = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  const auto r = SimConfig{}.resolved(100.0);
  EXPECT_NEAR(100e-6 * std::numbers::pi * r.window_radius_m * r.window_radius_m, 400.0, 1e-9);
  EXPECT_DOUBLE_EQ(r.guard_radius_m, r.window_radius_m / 4.0);
}
