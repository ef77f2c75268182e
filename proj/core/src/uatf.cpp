#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "densemimo/errors.hpp"
#include "densemimo/parallel.hpp"
#include "densemimo/simulator.hpp"
#include "stats.hpp"

namespace densemimo {
namespace {

using cd = std::complex<double>;

constexpr double kMaxGramCondition = 1e12;
constexpr std::size_t kJackknifeGroups = 20;

/// Sums over measured geometries of per-geometry fading means.
struct Totals {
  double count = 0.0;
  double signal = 0.0;     // Re E{v^H g_0}
  double signal_sq = 0.0;  // E|v^H g_0|^2
  double intra = 0.0;      // sum over the other own-cell UEs of E|v^H g_i|^2
  double noise = 0.0;
  double inter = 0.0;  // every other-cell UE, coherent part included
  double pilot = 0.0;  // coherent part |E{v^H g_u | geometry}|^2 of the pilot sharers
  std::uint64_t samples = 0;
  std::uint64_t discarded = 0;

  Totals& operator+=(const Totals& o) {
    count += o.count;
    signal += o.signal;
    signal_sq += o.signal_sq;
    intra += o.intra;
    noise += o.noise;
    inter += o.inter;
    pilot += o.pilot;
    samples += o.samples;
    discarded += o.discarded;
    return *this;
  }
  Totals& operator-=(const Totals& o) {
    count -= o.count;
    signal -= o.signal;
    signal_sq -= o.signal_sq;
    intra -= o.intra;
    noise -= o.noise;
    inter -= o.inter;
    pilot -= o.pilot;
    return *this;
  }
};

struct Terms {
  std::array<double, 5> v{};  // noise, intra, inter, pilot, sinr
};

Terms terms_of(const Totals& t) {
  Terms out;
  if (!(t.count > 0.0)) return out;
  const double s = t.signal / t.count;
  const double s2 = s * s;
  out.v[0] = t.noise / t.count / s2;
  out.v[1] = (t.signal_sq / t.count - s2 + t.intra / t.count) / s2;
  out.v[2] = (t.inter - t.pilot) / t.count / s2;
  out.v[3] = t.pilot / t.count / s2;
  out.v[4] = 1.0 / (out.v[0] + out.v[1] + out.v[2] + out.v[3]);
  return out;
}

/// Per-draw and per-geometry accumulation for one combiner.
struct SchemeAccumulator {
  cd signal_sum{};
  double signal_sq = 0.0;
  double intra = 0.0;
  double noise = 0.0;
  double inter = 0.0;
  std::vector<cd> coherent_sum;  // one entry per tracked pilot sharer
  std::vector<double> coherent_sq;
  int used = 0;
  std::uint64_t discarded = 0;

  void reset(std::size_t tracked) {
    *this = SchemeAccumulator{};
    coherent_sum.assign(tracked, cd{});
    coherent_sq.assign(tracked, 0.0);
  }
};

struct Geometry {
  int k = 0;
  std::vector<double> pilot_sum;  // R_t: sum of sharer ratios on typical pilot slot t
  std::vector<double> pilot_sq;   // Q_t: sum of squared sharer ratios
  double non_sharing = 0.0;       // ratios of UEs on pilots unused by the typical cell
  std::vector<double> ratio;      // brute mode: every other-cell UE
  std::vector<int> slot;          // brute mode: typical slot shared, or -1
};

Geometry build_geometry(const PathLossModel& model, const NetworkRealization& real,
                        const std::vector<std::vector<double>>& own, std::size_t j, const NetworkParams& params,
                        PilotMode mode, Rng& sharing, bool keep_each) {
  Geometry g;
  g.k = params.k;
  g.pilot_sum.assign(static_cast<std::size_t>(params.k), 0.0);
  g.pilot_sq.assign(static_cast<std::size_t>(params.k), 0.0);
  std::vector<int> slot_of_pilot;
  if (mode == PilotMode::kExplicitBook) {
    slot_of_pilot.assign(static_cast<std::size_t>(real.tau_p), -1);
    for (int t = 0; t < params.k; ++t) slot_of_pilot[static_cast<std::size_t>(real.pilot_index[j][t])] = t;
  }
  std::bernoulli_distribution share(1.0 / params.zeta);
  const Point b = real.bs_positions[j];
  for (std::size_t l = 0; l < real.bs_positions.size(); ++l) {
    if (l == j) continue;
    const bool shares = mode == PilotMode::kBernoulli && share(sharing);
    for (int i = 0; i < params.k; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      const double r = model.beta(distance(real.ue_positions[l][iu], b)) / own[l][iu];
      int slot = -1;
      if (mode == PilotMode::kBernoulli) {
        slot = shares ? i : -1;
      } else {
        slot = slot_of_pilot[static_cast<std::size_t>(real.pilot_index[l][iu])];
      }
      if (slot >= 0) {
        g.pilot_sum[static_cast<std::size_t>(slot)] += r;
        g.pilot_sq[static_cast<std::size_t>(slot)] += r * r;
      } else {
        g.non_sharing += r;
      }
      if (keep_each) {
        g.ratio.push_back(r);
        g.slot.push_back(slot);
      }
    }
  }
  return g;
}

void fill_gaussian(Eigen::MatrixXcd& a, double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      const double re = normal(rng);
      a(r, c) = cd(re, normal(rng));
    }
  }
}

class GeometrySimulator {
 public:
  GeometrySimulator(const NetworkParams& params, const SimConfig& config, std::span<const Scheme> schemes)
      : params_(params), config_(config), schemes_(schemes.begin(), schemes.end()) {
    const Eigen::Index m = params.m;
    const Eigen::Index k = params.k;
    own_.resize(m, k);
    shared_.resize(m, k);
    noise_.resize(m, k);
    obs_.resize(m, k);
    est_.resize(m, k);
    pilot_noise_ = 1.0 / (params.pilot_length() * params.snr0_linear());
    snr_ = params.snr0_linear();
  }

  /// Adds the per-geometry means of every scheme to `totals`.
  void run(const Geometry& geo, Rng& rng, std::span<Totals> totals) {
    const std::size_t k = static_cast<std::size_t>(params_.k);
    const bool brute = !config_.aggregate_colliders;
    std::vector<std::size_t> tracked;  // brute mode: indices of slot-0 sharers
    if (brute) {
      for (std::size_t u = 0; u < geo.ratio.size(); ++u) {
        if (geo.slot[u] == 0) tracked.push_back(u);
      }
    }
    std::vector<SchemeAccumulator> acc(schemes_.size());
    for (auto& a : acc) a.reset(brute ? tracked.size() : 1);

    Eigen::VectorXd scale(params_.k);
    for (std::size_t t = 0; t < k; ++t) {
      scale(static_cast<Eigen::Index>(t)) =
          config_.perfect_csi ? 1.0 : 1.0 / (1.0 + geo.pilot_sum[t] + pilot_noise_);
    }
    std::vector<Eigen::VectorXcd> each;
    if (brute) each.assign(geo.ratio.size(), Eigen::VectorXcd(params_.m));
    Eigen::MatrixXcd one(params_.m, 1);

    for (int f = 0; f < config_.fading_samples; ++f) {
      fill_gaussian(own_, 1.0, rng);
      if (brute) {
        shared_.setZero();
        for (std::size_t u = 0; u < each.size(); ++u) {
          fill_gaussian(one, geo.ratio[u], rng);
          each[u] = one.col(0);
          if (geo.slot[u] >= 0) shared_.col(geo.slot[u]) += each[u];
        }
      } else {
        for (std::size_t t = 0; t < k; ++t) {
          auto col = shared_.col(static_cast<Eigen::Index>(t));
          one.setZero();
          if (geo.pilot_sum[t] > 0.0) fill_gaussian(one, geo.pilot_sum[t], rng);
          col = one.col(0);
        }
      }
      fill_gaussian(noise_, pilot_noise_, rng);
      if (config_.perfect_csi) {
        obs_ = own_;
      } else {
        obs_ = own_ + shared_ + noise_;
      }

      for (std::size_t s = 0; s < schemes_.size(); ++s) {
        Eigen::VectorXcd v;
        if (schemes_[s] == Scheme::kMR) {
          v = obs_.col(0);
        } else {
          est_ = obs_ * scale.asDiagonal();
          const Eigen::MatrixXcd gram = est_.adjoint() * est_;
          const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
          const double lo = eig.eigenvalues().minCoeff();
          const double hi = eig.eigenvalues().maxCoeff();
          if (!(lo > 0.0) || hi / lo > kMaxGramCondition) {
            ++acc[s].discarded;
            continue;
          }
          Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(params_.k);
          e0(0) = 1.0;
          v = est_ * gram.ldlt().solve(e0);
        }
        accumulate(geo, v, each, tracked, acc[s]);
      }
    }

    for (std::size_t s = 0; s < schemes_.size(); ++s) {
      const SchemeAccumulator& a = acc[s];
      Totals& t = totals[s];
      t.discarded += a.discarded;
      if (a.used < 2) continue;
      const double n = a.used;
      double coherent = 0.0;
      for (std::size_t c = 0; c < a.coherent_sum.size(); ++c) {
        // Unbiased estimate of |E{x}|^2 from n draws: (|sum x|^2 - sum |x|^2) / (n (n - 1)).
        coherent += (std::norm(a.coherent_sum[c]) - a.coherent_sq[c]) / (n * (n - 1.0));
      }
      if (!brute) {
        const double r0 = geo.pilot_sum[0];
        coherent = r0 > 0.0 ? coherent * geo.pilot_sq[0] / (r0 * r0) : 0.0;
      }
      t.count += 1.0;
      t.signal += a.signal_sum.real() / n;
      t.signal_sq += a.signal_sq / n;
      t.intra += a.intra / n;
      t.noise += a.noise / n;
      t.inter += a.inter / n;
      t.pilot += coherent;
      t.samples += static_cast<std::uint64_t>(a.used);
    }
  }

 private:
  void accumulate(const Geometry& geo, const Eigen::VectorXcd& v, const std::vector<Eigen::VectorXcd>& each,
                  const std::vector<std::size_t>& tracked, SchemeAccumulator& a) const {
    const double vv = v.squaredNorm();
    const cd s = v.dot(own_.col(0));
    a.signal_sum += s;
    a.signal_sq += std::norm(s);
    double intra = 0.0;
    for (Eigen::Index i = 1; i < own_.cols(); ++i) intra += std::norm(v.dot(own_.col(i)));
    a.intra += intra;
    a.noise += vv / snr_;
    double inter = 0.0;
    if (config_.aggregate_colliders) {
      // Given v and the sharer sum S_t (variance R_t), E|v^H g_u|^2 summed over the sharers
      // of slot t is |v^H S_t|^2 Q_t / R_t^2 + |v|^2 (R_t - Q_t / R_t).
      for (std::size_t t = 0; t < geo.pilot_sum.size(); ++t) {
        const double r = geo.pilot_sum[t];
        if (!(r > 0.0)) continue;
        const double q = geo.pilot_sq[t];
        const cd y = v.dot(shared_.col(static_cast<Eigen::Index>(t)));
        inter += std::norm(y) * q / (r * r) + vv * (r - q / r);
        if (t == 0) {
          a.coherent_sum[0] += y;
          a.coherent_sq[0] += std::norm(y);
        }
      }
      inter += vv * geo.non_sharing;
    } else {
      for (const auto& g : each) inter += std::norm(v.dot(g));
      for (std::size_t c = 0; c < tracked.size(); ++c) {
        const cd x = v.dot(each[tracked[c]]);
        a.coherent_sum[c] += x;
        a.coherent_sq[c] += std::norm(x);
      }
    }
    a.inter += inter;
    ++a.used;
  }

  NetworkParams params_;
  SimConfig config_;
  std::vector<Scheme> schemes_;
  Eigen::MatrixXcd own_;
  Eigen::MatrixXcd shared_;
  Eigen::MatrixXcd noise_;
  Eigen::MatrixXcd obs_;
  Eigen::MatrixXcd est_;
  double pilot_noise_ = 0.0;
  double snr_ = 1.0;
};

Estimate jackknife(const std::vector<Totals>& groups, const Totals& all, std::size_t term) {
  Estimate e;
  e.mean = terms_of(all).v[term];
  std::vector<double> leave_out;
  for (const Totals& g : groups) {
    if (!(g.count > 0.0)) continue;
    Totals rest = all;
    rest -= g;
    if (!(rest.count > 0.0)) continue;
    leave_out.push_back(terms_of(rest).v[term]);
  }
  const double n = static_cast<double>(leave_out.size());
  if (n < 2.0) return e;
  detail::NeumaierSum mean;
  for (double x : leave_out) mean.add(x);
  const double m = mean.value() / n;
  detail::NeumaierSum dev;
  for (double x : leave_out) dev.add((x - m) * (x - m));
  e.std_error = std::sqrt((n - 1.0) / n * dev.value());
  e.ci_half_width = kZ99 * e.std_error;
  return e;
}

}  // namespace

SinrBreakdown UatfStats::breakdown() const noexcept {
  SinrBreakdown b;
  b.scheme = scheme;
  b.noise = noise.mean;
  b.intra_cell = intra_cell.mean;
  b.inter_cell = inter_cell.mean;
  b.pilot_contamination = pilot_contamination.mean;
  b.sinr = sinr.mean;
  return b;
}

TrialStats estimate_uatf_sinr(const PathLossModel& model, const NetworkParams& params, const SimConfig& config,
                              std::span<const Scheme> schemes) {
  params.validate();
  config.validate();
  if (schemes.empty()) throw ConfigError("no combining scheme requested");
  for (Scheme s : schemes) {
    if (s == Scheme::kZF && params.m <= params.k) throw DegreesOfFreedomError("ZF needs M > K");
  }
  const SimConfig cfg = config.resolved(params.lambda_km2);
  const bool book = cfg.pilot_mode == PilotMode::kExplicitBook;
  int tau_p = 0;
  if (book) {
    const double tau = params.zeta * params.k;
    if (std::abs(tau - std::round(tau)) > 1e-9) throw ConfigError("explicit pilot book needs an integer zeta * K");
    tau_p = static_cast<int>(std::round(tau));
  }
  const PilotMode mode = book ? PilotMode::kExplicitBook : PilotMode::kBernoulli;
  const std::size_t ns = schemes.size();

  struct PerRealization {
    std::vector<Totals> totals;
    std::uint64_t count_resamples = 0;
    std::uint64_t ue_resamples = 0;
    bool discarded = false;
  };
  std::vector<PerRealization> results(cfg.trials);
  parallel_for(cfg.trials, worker_count(cfg.threads), [&](std::size_t t) {
    const NetworkRealization real = realize(params.lambda_km2, params.k, tau_p, cfg, t);
    PerRealization& out = results[t];
    out.totals.assign(ns, Totals{});
    out.count_resamples = real.count_resamples;
    out.ue_resamples = real.ue_resamples;
    const auto typical = typical_indices(real, cfg);
    out.discarded = typical.empty();
    std::vector<std::vector<double>> own(real.bs_positions.size());
    for (std::size_t l = 0; l < own.size(); ++l) {
      for (const Point& u : real.ue_positions[l]) own[l].push_back(model.beta(distance(u, real.bs_positions[l])));
    }
    GeometrySimulator sim(params, cfg, schemes);
    for (std::size_t j : typical) {
      Rng sharing = make_rng(cfg.master_seed, Stream::kPilotSharing, t, j);
      const Geometry geo = build_geometry(model, real, own, j, params, mode, sharing, !cfg.aggregate_colliders);
      Rng fading = make_rng(cfg.master_seed, Stream::kFading, t, j);
      sim.run(geo, fading, out.totals);
    }
  });

  TrialStats stats;
  stats.realizations = cfg.trials;
  const std::size_t groups = std::min<std::size_t>(kJackknifeGroups, cfg.trials);
  for (std::size_t s = 0; s < ns; ++s) {
    Totals all;
    std::vector<Totals> grouped(groups);
    for (std::size_t t = 0; t < results.size(); ++t) {
      all += results[t].totals[s];
      grouped[t % groups] += results[t].totals[s];
    }
    if (!(all.count > 0.0)) throw ConfigError("no usable geometry in any trial");
    UatfStats u;
    u.scheme = schemes[s];
    u.noise = jackknife(grouped, all, 0);
    u.intra_cell = jackknife(grouped, all, 1);
    u.inter_cell = jackknife(grouped, all, 2);
    u.pilot_contamination = jackknife(grouped, all, 3);
    u.sinr = jackknife(grouped, all, 4);
    u.signal = all.signal / all.count;
    u.geometries = static_cast<std::uint64_t>(all.count);
    u.samples = all.samples;
    u.discarded_draws = all.discarded;
    stats.sinr_terms.push_back(u);
    if (s == 0) stats.n_effective = u.geometries;
  }
  for (const auto& r : results) {
    stats.count_resamples += r.count_resamples;
    stats.ue_resamples += r.ue_resamples;
    if (r.discarded) ++stats.discarded;
  }
  return stats;
}

UatfStats estimate_uatf_sinr(const PathLossModel& model, const NetworkParams& params, const SimConfig& config,
                             Scheme scheme) {
  const std::array<Scheme, 1> one{scheme};
  return estimate_uatf_sinr(model, params, config, one).sinr_terms.front();
}

}  // namespace densemimo
