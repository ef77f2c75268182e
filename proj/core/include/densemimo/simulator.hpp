#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "densemimo/analytics.hpp"
#include "densemimo/geometry.hpp"
#include "densemimo/pathloss.hpp"
#include "densemimo/rng.hpp"

namespace densemimo {

enum class PilotMode {
  kBernoulli,     ///< each other cell shares the typical pilot with probability 1/zeta
  kExplicitBook,  ///< each cell draws K distinct pilots out of tau_p = zeta K
};

enum class TypicalSelection {
  kGuardDisc,      ///< every BS inside the guard disc is measured
  kNearestCenter,  ///< only the BS nearest the window center
};

[[nodiscard]] std::string_view to_string(PilotMode mode) noexcept;
[[nodiscard]] PilotMode parse_pilot_mode(std::string_view text);
[[nodiscard]] std::string_view to_string(TypicalSelection selection) noexcept;
[[nodiscard]] TypicalSelection parse_typical_selection(std::string_view text);

struct SimConfig {
  /// Radius of the circular window. 0 picks the radius whose expected BS count is
  /// target_bs_count at the simulated density.
  double window_radius_m = 0.0;
  /// Only BSs this close to the center are measured. 0 means window_radius / 4.
  double guard_radius_m = 0.0;
  double target_bs_count = 400.0;
  std::uint64_t trials = 1000;  ///< independent network realizations
  std::uint64_t master_seed = 1;
  int ue_per_cell = 1;
  PilotMode pilot_mode = PilotMode::kBernoulli;
  TypicalSelection typical = TypicalSelection::kGuardDisc;
  int fading_samples = 10;  ///< small-scale fading draws per measured geometry (UatF)
  /// UatF: draw the sum of pilot-sharing channels directly instead of each channel.
  bool aggregate_colliders = true;
  bool perfect_csi = false;  ///< UatF: combiners built from the true channels
  std::size_t threads = 0;   ///< 0 = all hardware threads (DENSEMIMO_THREADS still caps)
  std::uint64_t max_proposals = 10'000'000;

  /// Throws ConfigError on negative radii, guard_radius > window_radius / 2, trials == 0,
  /// ue_per_cell < 1, fading_samples < 2 or a non-positive target count.
  void validate() const;
  /// Copy with the automatic radii filled in for the given density.
  [[nodiscard]] SimConfig resolved(double lambda_km2) const;
};

struct NetworkRealization {
  double window_radius_m = 0.0;
  std::vector<Point> bs_positions;
  /// ue_positions[l][i]: UE i of cell l, inside the Voronoi cell of BS l.
  std::vector<std::vector<Point>> ue_positions;
  /// Explicit-book mode only: pilot_index[l][i] in [0, tau_p). Bernoulli sharing
  /// indicators are drawn per measured BS pair instead of being stored.
  std::vector<std::vector<int>> pilot_index;
  int tau_p = 0;
  std::uint64_t count_resamples = 0;  ///< Poisson draws below 2 BSs that were redrawn
  std::uint64_t ue_resamples = 0;     ///< realizations redrawn after a stalled UE drop
};

/// Poisson number of BSs uniform in the disc, conditioned on at least two.
/// Throws ConfigError if the expected count is below 2.
[[nodiscard]] NetworkRealization generate_network(double lambda_km2, const SimConfig& config,
                                                  std::uint64_t trial_index);

/// Places k UEs uniformly in each BS's Voronoi cell (clipped to the window). Throws
/// SamplingStall if some cell needs more than config.max_proposals draws.
void drop_ues(NetworkRealization& realization, int k, const SimConfig& config, std::uint64_t trial_index);

/// Explicit pilot book: every cell draws K distinct pilots out of tau_p.
void assign_pilots(NetworkRealization& realization, int tau_p, const SimConfig& config,
                   std::uint64_t trial_index);

/// Network + UEs (+ pilots when tau_p > 0), redrawn with a fresh substream if the UE
/// drop stalls. The number of redraws is recorded in ue_resamples.
[[nodiscard]] NetworkRealization realize(double lambda_km2, int k, int tau_p, const SimConfig& config,
                                         std::uint64_t trial_index);

/// BSs to be measured as typical, ascending.
[[nodiscard]] std::vector<std::size_t> typical_indices(const NetworkRealization& realization,
                                                       const SimConfig& config);

/// Interference seen by the pilot of UE 0 in cell `bs`.
struct TypicalSample {
  double ratio_sum = 0.0;          ///< sum over other cells of beta^bs / beta^own
  double ratio_sq_sum = 0.0;       ///< same with squared ratios
  double pilot_ratio_sum = 0.0;    ///< restricted to the cells that share the pilot
  double nmse = 0.0;               ///< 1 - gamma / beta for the drawn sharing pattern
};

/// Evaluates one typical BS. `sharing` supplies the Bernoulli indicators.
[[nodiscard]] TypicalSample measure_typical(const PathLossModel& model, const NetworkRealization& realization,
                                            std::size_t bs, const NetworkParams& params, PilotMode mode,
                                            Rng& sharing);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_half_width = 0.0;  ///< 99% two-sided
  [[nodiscard]] double lower() const noexcept { return mean - ci_half_width; }
  [[nodiscard]] double upper() const noexcept { return mean + ci_half_width; }
  [[nodiscard]] bool contains(double value) const noexcept { return value >= lower() && value <= upper(); }
};

inline constexpr double kZ99 = 2.5758293035489004;

struct UatfStats {
  Scheme scheme = Scheme::kMR;
  Estimate noise;
  Estimate intra_cell;
  Estimate inter_cell;
  Estimate pilot_contamination;
  Estimate sinr;
  double signal = 0.0;  ///< E{v^H g} in channel-inversion units
  std::uint64_t geometries = 0;
  std::uint64_t samples = 0;          ///< geometry x fading draws used
  std::uint64_t discarded_draws = 0;  ///< ZF Gram condition above 1e12

  [[nodiscard]] SinrBreakdown breakdown() const noexcept;
};

struct TrialStats {
  Estimate mu1;
  Estimate mu2;
  std::optional<Estimate> nmse;
  std::vector<UatfStats> sinr_terms;
  std::uint64_t n_effective = 0;  ///< measured typical UEs
  std::uint64_t realizations = 0;
  std::uint64_t discarded = 0;  ///< realizations without a typical BS
  std::uint64_t count_resamples = 0;
  std::uint64_t ue_resamples = 0;
};

[[nodiscard]] TrialStats estimate_mu(const PathLossModel& model, double lambda_km2, const SimConfig& config);

/// Also fills mu1/mu2. Explicit-book mode needs an integer zeta K.
[[nodiscard]] TrialStats estimate_nmse(const PathLossModel& model, const NetworkParams& params,
                                       const SimConfig& config);

/// UatF SINR and its four terms, normalized by the squared mean signal. All schemes are
/// evaluated on the same draws. Throws DegreesOfFreedomError for ZF with M <= K.
[[nodiscard]] TrialStats estimate_uatf_sinr(const PathLossModel& model, const NetworkParams& params,
                                            const SimConfig& config, std::span<const Scheme> schemes);
[[nodiscard]] UatfStats estimate_uatf_sinr(const PathLossModel& model, const NetworkParams& params,
                                           const SimConfig& config, Scheme scheme);

}  // namespace densemimo
