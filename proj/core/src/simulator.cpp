#include "densemimo/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "densemimo/errors.hpp"
#include "densemimo/parallel.hpp"
#include "stats.hpp"

namespace densemimo {
namespace {

constexpr int kMaxRealizationAttempts = 100;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

NetworkRealization generate_attempt(double lambda_km2, const SimConfig& config, std::uint64_t trial_index,
                                    std::uint64_t attempt) {
  if (!(lambda_km2 > 0.0) || !std::isfinite(lambda_km2)) throw ConfigError("BS density must be positive");
  const SimConfig cfg = config.resolved(lambda_km2);
  const double radius = cfg.window_radius_m;
  const double expected = lambda_km2 * 1e-6 * std::numbers::pi * radius * radius;
  if (expected < 2.0) throw ConfigError("window too small for the density: expected BS count below 2");

  Rng rng = make_rng(cfg.master_seed, Stream::kBaseStations, trial_index, attempt);
  std::poisson_distribution<std::uint64_t> count(expected);
  NetworkRealization out;
  out.window_radius_m = radius;
  std::uint64_t n = count(rng);
  while (n < 2) {
    ++out.count_resamples;
    n = count(rng);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  out.bs_positions.resize(n);
  for (Point& p : out.bs_positions) {
    const double r = radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    p = {r * std::cos(theta), r * std::sin(theta)};
  }
  return out;
}

void drop_attempt(NetworkRealization& real, int k, const SimConfig& config, std::uint64_t trial_index,
                  std::uint64_t attempt) {
  if (real.bs_positions.size() < 2) throw ConfigError("UE drop needs at least two BSs");
  if (k < 1) throw ConfigError("need at least one UE per cell");
  const double radius = real.window_radius_m;
  const auto n = static_cast<double>(real.bs_positions.size());
  const double cell = radius * std::sqrt(std::numbers::pi / n);
  const SpatialGrid grid(real.bs_positions, radius, cell);
  Rng rng = make_rng(config.master_seed, Stream::kUserPlacement, trial_index, attempt);
  const double r2 = radius * radius;
  real.ue_positions.assign(real.bs_positions.size(), {});
  for (std::size_t l = 0; l < real.bs_positions.size(); ++l) {
    const ConvexSampler sampler(voronoi_cell(real.bs_positions, grid, l, radius));
    auto& ues = real.ue_positions[l];
    ues.reserve(static_cast<std::size_t>(k));
    std::uint64_t proposals = 0;
    while (ues.size() < static_cast<std::size_t>(k)) {
      if (++proposals > config.max_proposals) throw SamplingStall("UE placement stalled");
      const Point p = sampler(rng);
      if (p.x * p.x + p.y * p.y <= r2) ues.push_back(p);
    }
  }
}

void pilots_attempt(NetworkRealization& real, int tau_p, const SimConfig& config, std::uint64_t trial_index,
                    std::uint64_t attempt) {
  if (real.ue_positions.size() != real.bs_positions.size()) throw ConfigError("pilots need UEs to be dropped");
  Rng rng = make_rng(config.master_seed, Stream::kPilots, trial_index, attempt);
  std::vector<int> book(static_cast<std::size_t>(tau_p));
  real.tau_p = tau_p;
  real.pilot_index.assign(real.bs_positions.size(), {});
  for (std::size_t l = 0; l < real.bs_positions.size(); ++l) {
    const std::size_t k = real.ue_positions[l].size();
    if (k > book.size()) throw ConfigError("pilot book shorter than the number of UEs per cell");
    std::iota(book.begin(), book.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, book.size() - 1);
      std::swap(book[i], book[pick(rng)]);
    }
    real.pilot_index[l].assign(book.begin(), book.begin() + static_cast<std::ptrdiff_t>(k));
  }
}

int book_length(const NetworkParams& params) {
  const double tau = params.zeta * params.k;
  const double rounded = std::round(tau);
  if (std::abs(tau - rounded) > 1e-9) throw ConfigError("explicit pilot book needs an integer zeta * K");
  return static_cast<int>(rounded);
}

std::vector<std::vector<double>> own_gains(const PathLossModel& model, const NetworkRealization& real,
                                           std::size_t ues) {
  std::vector<std::vector<double>> gains(real.bs_positions.size());
  for (std::size_t l = 0; l < gains.size(); ++l) {
    const std::size_t n = std::min(ues, real.ue_positions[l].size());
    gains[l].resize(n);
    for (std::size_t i = 0; i < n; ++i) gains[l][i] = model.beta(distance(real.ue_positions[l][i], real.bs_positions[l]));
  }
  return gains;
}

TypicalSample measure_with_gains(const PathLossModel& model, const NetworkRealization& real,
                                 const std::vector<std::vector<double>>& own, std::size_t bs,
                                 const NetworkParams& params, PilotMode mode, Rng& sharing) {
  TypicalSample out;
  const Point b = real.bs_positions[bs];
  std::bernoulli_distribution share(1.0 / params.zeta);
  const int pilot = mode == PilotMode::kExplicitBook ? real.pilot_index.at(bs).at(0) : 0;
  for (std::size_t l = 0; l < real.bs_positions.size(); ++l) {
    if (l == bs) continue;
    const double r = model.beta(distance(real.ue_positions[l][0], b)) / own[l][0];
    out.ratio_sum += r;
    out.ratio_sq_sum += r * r;
    if (mode == PilotMode::kBernoulli) {
      if (share(sharing)) out.pilot_ratio_sum += r;
    } else {
      const auto& idx = real.pilot_index[l];
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] != pilot) continue;
        out.pilot_ratio_sum += i == 0 ? r : model.beta(distance(real.ue_positions[l][i], b)) / own[l][i];
        break;
      }
    }
  }
  const double noise = 1.0 / (params.pilot_length() * params.snr0_linear());
  out.nmse = 1.0 - 1.0 / (1.0 + out.pilot_ratio_sum + noise);
  return out;
}

struct InterferenceClusters {
  detail::Cluster mu1;
  detail::Cluster mu2;
  detail::Cluster nmse;
  std::uint64_t count_resamples = 0;
  std::uint64_t ue_resamples = 0;
  bool discarded = false;
};

void add(detail::Cluster& c, double x) {
  c.count += 1.0;
  c.sum += x;
  c.sum_sq += x * x;
}

TrialStats run_interference(const PathLossModel& model, const NetworkParams& params, const SimConfig& config,
                            bool with_nmse) {
  config.validate();
  const SimConfig cfg = config.resolved(params.lambda_km2);
  const bool book = with_nmse && cfg.pilot_mode == PilotMode::kExplicitBook;
  const int tau_p = book ? book_length(params) : 0;
  const int k = book ? params.k : 1;
  const PilotMode mode = book ? PilotMode::kExplicitBook : PilotMode::kBernoulli;

  std::vector<InterferenceClusters> clusters(cfg.trials);
  parallel_for(cfg.trials, worker_count(cfg.threads), [&](std::size_t t) {
    const NetworkRealization real = realize(params.lambda_km2, k, tau_p, cfg, t);
    InterferenceClusters& c = clusters[t];
    c.count_resamples = real.count_resamples;
    c.ue_resamples = real.ue_resamples;
    const auto typical = typical_indices(real, cfg);
    c.discarded = typical.empty();
    const auto own = own_gains(model, real, static_cast<std::size_t>(k));
    for (std::size_t j : typical) {
      Rng sharing = make_rng(cfg.master_seed, Stream::kPilotSharing, t, j);
      const TypicalSample s = measure_with_gains(model, real, own, j, params, mode, sharing);
      add(c.mu1, s.ratio_sum);
      add(c.mu2, s.ratio_sq_sum);
      add(c.nmse, s.nmse);
    }
  });

  TrialStats stats;
  std::vector<detail::Cluster> mu1;
  std::vector<detail::Cluster> mu2;
  std::vector<detail::Cluster> nmse;
  for (const auto& c : clusters) {
    mu1.push_back(c.mu1);
    mu2.push_back(c.mu2);
    nmse.push_back(c.nmse);
    stats.n_effective += static_cast<std::uint64_t>(c.mu1.count);
    stats.count_resamples += c.count_resamples;
    stats.ue_resamples += c.ue_resamples;
    if (c.discarded) ++stats.discarded;
  }
  stats.realizations = cfg.trials;
  if (stats.n_effective == 0) throw ConfigError("no typical BS fell inside the guard radius in any trial");
  stats.mu1 = detail::cluster_estimate(mu1);
  stats.mu2 = detail::cluster_estimate(mu2);
  if (with_nmse) stats.nmse = detail::cluster_estimate(nmse);
  return stats;
}

}  // namespace

std::string_view to_string(PilotMode mode) noexcept {
  return mode == PilotMode::kBernoulli ? "bernoulli" : "explicit-book";
}

PilotMode parse_pilot_mode(std::string_view text) {
  const std::string t = lower(text);
  if (t == "bernoulli") return PilotMode::kBernoulli;
  if (t == "explicit-book" || t == "book") return PilotMode::kExplicitBook;
  throw ConfigError("unknown pilot mode '" + std::string(text) + "'");
}

std::string_view to_string(TypicalSelection selection) noexcept {
  return selection == TypicalSelection::kGuardDisc ? "guard-disc" : "nearest-center";
}

TypicalSelection parse_typical_selection(std::string_view text) {
  const std::string t = lower(text);
  if (t == "guard-disc") return TypicalSelection::kGuardDisc;
  if (t == "nearest-center") return TypicalSelection::kNearestCenter;
  throw ConfigError("unknown typical-BS selection '" + std::string(text) + "'");
}

void SimConfig::validate() const {
  if (!(window_radius_m >= 0.0) || !std::isfinite(window_radius_m)) throw ConfigError("window radius must be >= 0");
  if (!(guard_radius_m >= 0.0) || !std::isfinite(guard_radius_m)) throw ConfigError("guard radius must be >= 0");
  if (window_radius_m > 0.0 && guard_radius_m > 0.5 * window_radius_m) {
    throw ConfigError("guard radius must not exceed half the window radius");
  }
  if (!(target_bs_count >= 2.0) || !std::isfinite(target_bs_count)) {
    throw ConfigError("target BS count must be at least 2");
  }
  if (trials < 1) throw ConfigError("need at least one trial");
  if (ue_per_cell < 1) throw ConfigError("need at least one UE per cell");
  if (fading_samples < 2) throw ConfigError("need at least two fading samples per geometry");
  if (max_proposals < 1) throw ConfigError("proposal budget must be positive");
}

SimConfig SimConfig::resolved(double lambda_km2) const {
  validate();
  SimConfig out = *this;
  if (out.window_radius_m == 0.0) {
    out.window_radius_m = std::sqrt(target_bs_count / (lambda_km2 * 1e-6 * std::numbers::pi));
  }
  if (out.guard_radius_m == 0.0) out.guard_radius_m = 0.25 * out.window_radius_m;
  if (out.guard_radius_m > 0.5 * out.window_radius_m) {
    throw ConfigError("guard radius must not exceed half the window radius");
  }
  return out;
}

NetworkRealization generate_network(double lambda_km2, const SimConfig& config, std::uint64_t trial_index) {
  return generate_attempt(lambda_km2, config, trial_index, 0);
}

void drop_ues(NetworkRealization& realization, int k, const SimConfig& config, std::uint64_t trial_index) {
  drop_attempt(realization, k, config, trial_index, realization.ue_resamples);
}

void assign_pilots(NetworkRealization& realization, int tau_p, const SimConfig& config,
                   std::uint64_t trial_index) {
  pilots_attempt(realization, tau_p, config, trial_index, realization.ue_resamples);
}

NetworkRealization realize(double lambda_km2, int k, int tau_p, const SimConfig& config,
                           std::uint64_t trial_index) {
  for (int attempt = 0; attempt < kMaxRealizationAttempts; ++attempt) {
    NetworkRealization real = generate_attempt(lambda_km2, config, trial_index, attempt);
    real.ue_resamples = static_cast<std::uint64_t>(attempt);
    try {
      drop_attempt(real, k, config, trial_index, attempt);
    } catch (const SamplingStall&) {
      continue;
    }
    if (tau_p > 0) pilots_attempt(real, tau_p, config, trial_index, attempt);
    return real;
  }
  throw SamplingStall("UE placement stalled in every redrawn realization");
}

std::vector<std::size_t> typical_indices(const NetworkRealization& realization, const SimConfig& config) {
  const double guard = config.guard_radius_m > 0.0 ? config.guard_radius_m : 0.25 * realization.window_radius_m;
  const double g2 = guard * guard;
  std::vector<std::size_t> out;
  const auto& bs = realization.bs_positions;
  if (config.typical == TypicalSelection::kGuardDisc) {
    for (std::size_t l = 0; l < bs.size(); ++l) {
      if (bs[l].x * bs[l].x + bs[l].y * bs[l].y <= g2) out.push_back(l);
    }
    return out;
  }
  if (bs.empty()) return out;
  std::size_t best = 0;
  for (std::size_t l = 1; l < bs.size(); ++l) {
    if (squared_distance(bs[l], {}) < squared_distance(bs[best], {})) best = l;
  }
  if (squared_distance(bs[best], {}) <= g2) out.push_back(best);
  return out;
}

TypicalSample measure_typical(const PathLossModel& model, const NetworkRealization& realization, std::size_t bs,
                              const NetworkParams& params, PilotMode mode, Rng& sharing) {
  if (bs >= realization.bs_positions.size()) throw ConfigError("typical BS index out of range");
  if (realization.ue_positions.size() != realization.bs_positions.size()) {
    throw ConfigError("realization has no UEs");
  }
  const std::size_t k = mode == PilotMode::kExplicitBook ? static_cast<std::size_t>(params.k) : 1;
  return measure_with_gains(model, realization, own_gains(model, realization, k), bs, params, mode, sharing);
}

TrialStats estimate_mu(const PathLossModel& model, double lambda_km2, const SimConfig& config) {
  NetworkParams params;
  params.lambda_km2 = lambda_km2;
  return run_interference(model, params, config, false);
}

TrialStats estimate_nmse(const PathLossModel& model, const NetworkParams& params, const SimConfig& config) {
  params.validate_without_m();
  return run_interference(model, params, config, true);
}

}  // namespace densemimo
