#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "densemimo/pathloss.hpp"

namespace densemimo {

enum class Scheme { kMR, kZF };

[[nodiscard]] std::string_view to_string(Scheme scheme) noexcept;
/// Accepts "mr"/"zf" in any case. Throws ConfigError otherwise.
[[nodiscard]] Scheme parse_scheme(std::string_view text);

/// Scenario shared by the closed forms and the simulator.
///
/// The pilot reuse factor is real-valued: tau_p = zeta * k need not be an integer in the
/// closed forms.
struct NetworkParams {
  double lambda_km2 = 10.0;  ///< BS density in BS/km^2
  int m = 100;               ///< antennas per BS
  int k = 10;                ///< UEs per cell
  double zeta = 1.0;         ///< pilot reuse factor, tau_p = zeta * k
  double tau_c = 200.0;      ///< coherence block length in samples
  double snr0_db = 5.0;      ///< uniform received SNR rho / sigma^2

  /// Throws ConfigError unless m >= 1, k >= 1, zeta >= 1, zeta * k <= tau_c, lambda > 0
  /// and the SNR is finite.
  void validate() const;
  /// Same as validate() but ignores m (for the M -> infinity quantities).
  void validate_without_m() const;

  [[nodiscard]] double snr0_linear() const noexcept;
  [[nodiscard]] double lambda_per_m2() const noexcept { return lambda_km2 * 1e-6; }
  [[nodiscard]] double pilot_length() const noexcept { return zeta * k; }
  /// Fraction of the coherence block left for data, 1 - zeta K / tau_c.
  [[nodiscard]] double prelog() const noexcept { return 1.0 - pilot_length() / tau_c; }
};

/// Average interference moments mu_1 (power ratios) and mu_2 (squared power ratios).
struct MuCoefficients {
  double mu1 = 0.0;
  double mu2 = 0.0;
};

/// Denominator of the effective SINR split into its four impairments.
struct SinrBreakdown {
  double noise = 0.0;
  double intra_cell = 0.0;
  double inter_cell = 0.0;
  double pilot_contamination = 0.0;
  double sinr = 0.0;
  Scheme scheme = Scheme::kMR;

  [[nodiscard]] double denominator() const noexcept {
    return noise + intra_cell + inter_cell + pilot_contamination;
  }
};

/// mu_kappa for kappa in {1, 2}: the mean over the Poisson deployment of
/// sum_{l != j} (beta_l^j / beta_l^l)^kappa, where beta_l^j is the gain from a UE of
/// cell l to the typical BS j.
///
/// Throws SingularityError if kappa * alpha_n is within 1e-9 of 2 for some slope,
/// DivergenceError if kappa * alpha_N <= 2.
[[nodiscard]] double mu_coefficient(const PathLossModel& model, double lambda_km2, int kappa);
[[nodiscard]] MuCoefficients mu_coefficients(const PathLossModel& model, double lambda_km2);

/// A(mu1) = 1 + mu1 / zeta + 1 / (zeta K SNR0).
[[nodiscard]] double big_a(double mu1, const NetworkParams& params);

/// Upper bound 1 - 1 / A(mu1) on the average channel-estimate NMSE.
[[nodiscard]] double nmse_bound(const MuCoefficients& mu, const NetworkParams& params);
[[nodiscard]] double nmse_bound(const PathLossModel& model, const NetworkParams& params);

[[nodiscard]] SinrBreakdown sinr_mr(const MuCoefficients& mu, const NetworkParams& params);
[[nodiscard]] SinrBreakdown sinr_mr(const PathLossModel& model, const NetworkParams& params);
/// Throws DegreesOfFreedomError when M <= K.
[[nodiscard]] SinrBreakdown sinr_zf(const MuCoefficients& mu, const NetworkParams& params);
[[nodiscard]] SinrBreakdown sinr_zf(const PathLossModel& model, const NetworkParams& params);
[[nodiscard]] SinrBreakdown sinr(const MuCoefficients& mu, const NetworkParams& params, Scheme scheme);

/// Use-and-then-forget lower bound (1 - K zeta / tau_c) log2(1 + gamma), bit/s/Hz.
[[nodiscard]] double se_lower_bound(const MuCoefficients& mu, const NetworkParams& params, Scheme scheme);
[[nodiscard]] double se_lower_bound(const PathLossModel& model, const NetworkParams& params, Scheme scheme);

/// Rate as M -> infinity: (1 - zeta K / tau_c) log2(1 + zeta / mu2).
[[nodiscard]] double rate_asymptotic(double mu2, double zeta, int k, double tau_c);
[[nodiscard]] double rate_asymptotic(const PathLossModel& model, const NetworkParams& params);

struct OptimalZeta {
  double clamped = 1.0;    ///< projected onto the feasible range [1, tau_c / K]
  double unclamped = 1.0;  ///< stationary point of the asymptotic rate
};

/// Maximizer of rate_asymptotic over zeta via the Lambert-W closed form
/// zeta* = mu2 (nu / W0(nu e) - 1), nu = 1 + tau_c / (mu2 K).
[[nodiscard]] OptimalZeta optimal_zeta_asymptotic(double mu2, int k, double tau_c);
[[nodiscard]] OptimalZeta optimal_zeta_asymptotic(const PathLossModel& model, double lambda_km2, int k,
                                                  double tau_c);

/// Pilot lengths tau_p = K, K+1, ..., floor(tau_c) - 1 expressed as zeta = tau_p / K.
[[nodiscard]] std::vector<double> default_zeta_grid(int k, double tau_c);

/// Grid point maximizing se_lower_bound (params.zeta is ignored). Points outside
/// [1, tau_c / K] are skipped; ties go to the smaller zeta. Throws ConfigError if no
/// feasible point remains.
[[nodiscard]] double optimal_zeta_exhaustive(const MuCoefficients& mu, const NetworkParams& params,
                                             Scheme scheme, std::span<const double> zeta_grid);
[[nodiscard]] double optimal_zeta_exhaustive(const PathLossModel& model, const NetworkParams& params,
                                             Scheme scheme, std::span<const double> zeta_grid);

/// Antenna-UE ratio M/K at which intra- plus inter-cell interference equals pilot
/// contamination (params.m is ignored). Above it, pilot contamination dominates.
[[nodiscard]] double crossover_antenna_ratio(const MuCoefficients& mu, const NetworkParams& params,
                                             Scheme scheme);
[[nodiscard]] double crossover_antenna_ratio(const PathLossModel& model, const NetworkParams& params,
                                             Scheme scheme);

/// lambda K SE in bit/s/Hz/km^2.
[[nodiscard]] double area_se(const MuCoefficients& mu, const NetworkParams& params, Scheme scheme);
[[nodiscard]] double area_se(const PathLossModel& model, const NetworkParams& params, Scheme scheme);

}  // namespace densemimo
