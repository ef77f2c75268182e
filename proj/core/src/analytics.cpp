#include "densemimo/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "densemimo/errors.hpp"
#include "densemimo/specfun.hpp"

namespace densemimo {
namespace {

constexpr double kSingularTol = 1e-9;

// Q(s, a) - Q(s, b) for a <= b, taken from whichever tail keeps precision.
double gamma_q_difference(double s, double a, double b) {
  if (b < s + 1.0) {
    return specfun::lower_gamma_regularized(s, b) - specfun::lower_gamma_regularized(s, a);
  }
  return specfun::upper_gamma_regularized(s, a) - specfun::upper_gamma_regularized(s, b);
}

// R^(2 - ka) with the convention inf^(negative) = 0.
double radius_power(double r, double ka) {
  if (std::isinf(r)) return 0.0;
  return std::pow(r, 2.0 - ka);
}

// Coefficient of r^(kappa alpha_n) in the interferer integral for a UE whose own
// distance lies in slope n.
double continuity_coefficient(const PathLossModel& model, std::size_t n, int kappa) {
  const auto alphas = model.alphas();
  const auto ups = model.upsilons();
  const std::size_t slopes = alphas.size();
  if (n + 1 == slopes) return 0.0;
  const double ka_n = kappa * alphas[n];
  double c = -radius_power(model.outer_radius(n), ka_n) / (ka_n - 2.0);
  for (std::size_t i = n + 1; i < slopes; ++i) {
    const double ka_i = kappa * alphas[i];
    const double gain = std::pow(ups[i] / ups[n], kappa);
    c += gain * (radius_power(model.inner_radius(i), ka_i) - radius_power(model.outer_radius(i), ka_i)) /
         (ka_i - 2.0);
  }
  return c;
}

void require_positive_mu2(const MuCoefficients& mu) {
  if (!(mu.mu2 > 0.0)) throw DomainError("mu2 must be > 0");
}

}  // namespace

std::string_view to_string(Scheme scheme) noexcept {
  return scheme == Scheme::kMR ? "MR" : "ZF";
}

Scheme parse_scheme(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "mr") return Scheme::kMR;
  if (lower == "zf") return Scheme::kZF;
  throw ConfigError("unknown combining scheme '" + std::string(text) + "' (expected mr or zf)");
}

void NetworkParams::validate_without_m() const {
  if (!(lambda_km2 > 0.0) || !std::isfinite(lambda_km2)) throw ConfigError("lambda must be finite and > 0");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (!(zeta >= 1.0) || !std::isfinite(zeta)) throw ConfigError("zeta must be finite and >= 1");
  if (!std::isfinite(tau_c) || pilot_length() > tau_c) {
    throw ConfigError("pilot length zeta*K = " + std::to_string(pilot_length()) +
                      " exceeds the coherence block tau_c = " + std::to_string(tau_c));
  }
  if (!std::isfinite(snr0_db)) throw ConfigError("snr0_db must be finite");
}

void NetworkParams::validate() const {
  validate_without_m();
  if (m < 1) throw ConfigError("m must be >= 1");
}

double NetworkParams::snr0_linear() const noexcept { return std::pow(10.0, snr0_db / 10.0); }

double mu_coefficient(const PathLossModel& model, double lambda_km2, int kappa) {
  if (kappa != 1 && kappa != 2) throw DomainError("kappa must be 1 or 2");
  if (!(lambda_km2 > 0.0) || !std::isfinite(lambda_km2)) throw DomainError("lambda must be finite and > 0");
  const auto alphas = model.alphas();
  if (kappa * alphas.back() <= 2.0) {
    throw DivergenceError("mu_" + std::to_string(kappa) + " is infinite: kappa*alpha_N = " +
                          std::to_string(kappa * alphas.back()) + " <= 2");
  }
  for (double a : alphas) {
    if (std::abs(kappa * a - 2.0) <= kSingularTol) {
      throw SingularityError("kappa*alpha = 2 makes the mu_" + std::to_string(kappa) + " closed form singular");
    }
  }

  const double pl = std::numbers::pi * lambda_km2 * 1e-6;
  double mu = 0.0;
  for (std::size_t n = 0; n < alphas.size(); ++n) {
    const double ka = kappa * alphas[n];
    const double r_in = model.inner_radius(n);
    const double r_out = model.outer_radius(n);
    const double u_in = pl * r_in * r_in;
    const double u_out = std::isinf(r_out) ? r_out : pl * r_out * r_out;

    mu += 2.0 * gamma_q_difference(2.0, u_in, u_out) / (ka - 2.0);

    const double c = continuity_coefficient(model, n, kappa);
    if (c != 0.0) {
      const double s = 1.0 + ka / 2.0;
      mu += 2.0 * c * std::pow(pl, 1.0 - ka / 2.0) * std::tgamma(s) * gamma_q_difference(s, u_in, u_out);
    }
  }
  return mu;
}

MuCoefficients mu_coefficients(const PathLossModel& model, double lambda_km2) {
  return {mu_coefficient(model, lambda_km2, 1), mu_coefficient(model, lambda_km2, 2)};
}

double big_a(double mu1, const NetworkParams& params) {
  if (!(mu1 >= 0.0)) throw DomainError("mu1 must be >= 0");
  return 1.0 + mu1 / params.zeta + 1.0 / (params.pilot_length() * params.snr0_linear());
}

double nmse_bound(const MuCoefficients& mu, const NetworkParams& params) {
  params.validate_without_m();
  return 1.0 - 1.0 / big_a(mu.mu1, params);
}

double nmse_bound(const PathLossModel& model, const NetworkParams& params) {
  params.validate_without_m();
  return nmse_bound(MuCoefficients{mu_coefficient(model, params.lambda_km2, 1), 0.0}, params);
}

SinrBreakdown sinr_mr(const MuCoefficients& mu, const NetworkParams& params) {
  params.validate();
  const double a = big_a(mu.mu1, params);
  const double m = params.m;
  const double k = params.k;
  SinrBreakdown out;
  out.scheme = Scheme::kMR;
  out.noise = a / (m * params.snr0_linear());
  out.intra_cell = k / m * a;
  out.inter_cell = k / m * (a * mu.mu1 + mu.mu2 / params.zeta);
  out.pilot_contamination = mu.mu2 / params.zeta;
  out.sinr = 1.0 / out.denominator();
  return out;
}

SinrBreakdown sinr_zf(const MuCoefficients& mu, const NetworkParams& params) {
  params.validate();
  if (params.m <= params.k) {
    throw DegreesOfFreedomError("zero-forcing needs M > K (M = " + std::to_string(params.m) +
                                ", K = " + std::to_string(params.k) + ")");
  }
  const double a = big_a(mu.mu1, params);
  const double dof = params.m - params.k;
  const double k = params.k;
  SinrBreakdown out;
  out.scheme = Scheme::kZF;
  out.noise = a / (dof * params.snr0_linear());
  out.intra_cell = k / dof * (a - 1.0);
  out.inter_cell = k / dof * a * mu.mu1;
  out.pilot_contamination = mu.mu2 / params.zeta;
  out.sinr = 1.0 / out.denominator();
  return out;
}

SinrBreakdown sinr_mr(const PathLossModel& model, const NetworkParams& params) {
  params.validate();
  return sinr_mr(mu_coefficients(model, params.lambda_km2), params);
}

SinrBreakdown sinr_zf(const PathLossModel& model, const NetworkParams& params) {
  params.validate();
  return sinr_zf(mu_coefficients(model, params.lambda_km2), params);
}

SinrBreakdown sinr(const MuCoefficients& mu, const NetworkParams& params, Scheme scheme) {
  return scheme == Scheme::kMR ? sinr_mr(mu, params) : sinr_zf(mu, params);
}

double se_lower_bound(const MuCoefficients& mu, const NetworkParams& params, Scheme scheme) {
  const double gamma = sinr(mu, params, scheme).sinr;
  return params.prelog() * std::log2(1.0 + gamma);
}

double se_lower_bound(const PathLossModel& model, const NetworkParams& params, Scheme scheme) {
  params.validate();
  return se_lower_bound(mu_coefficients(model, params.lambda_km2), params, scheme);
}

double rate_asymptotic(double mu2, double zeta, int k, double tau_c) {
  if (!(mu2 > 0.0)) throw DomainError("mu2 must be > 0");
  NetworkParams p;
  p.zeta = zeta;
  p.k = k;
  p.tau_c = tau_c;
  p.validate_without_m();
  return p.prelog() * std::log2(1.0 + zeta / mu2);
}

double rate_asymptotic(const PathLossModel& model, const NetworkParams& params) {
  params.validate_without_m();
  return rate_asymptotic(mu_coefficient(model, params.lambda_km2, 2), params.zeta, params.k, params.tau_c);
}

OptimalZeta optimal_zeta_asymptotic(double mu2, int k, double tau_c) {
  if (!(mu2 > 0.0)) throw DomainError("mu2 must be > 0");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (!(tau_c >= k)) throw ConfigError("tau_c must be >= K");
  const double nu = 1.0 + tau_c / (mu2 * k);
  const double w = specfun::lambert_w0(nu * std::numbers::e);
  OptimalZeta out;
  out.unclamped = mu2 * (nu / w - 1.0);
  out.clamped = std::clamp(out.unclamped, 1.0, tau_c / k);
  return out;
}

OptimalZeta optimal_zeta_asymptotic(const PathLossModel& model, double lambda_km2, int k, double tau_c) {
  return optimal_zeta_asymptotic(mu_coefficient(model, lambda_km2, 2), k, tau_c);
}

std::vector<double> default_zeta_grid(int k, double tau_c) {
  if (k < 1) throw ConfigError("k must be >= 1");
  std::vector<double> grid;
  const int max_tau_p = static_cast<int>(std::floor(tau_c)) - 1;
  for (int tau_p = k; tau_p <= max_tau_p; ++tau_p) grid.push_back(static_cast<double>(tau_p) / k);
  if (grid.empty()) grid.push_back(1.0);
  return grid;
}

double optimal_zeta_exhaustive(const MuCoefficients& mu, const NetworkParams& params, Scheme scheme,
                               std::span<const double> zeta_grid) {
  const double zeta_max = params.tau_c / params.k;
  std::vector<double> feasible;
  for (double z : zeta_grid) {
    if (std::isfinite(z) && z >= 1.0 && z <= zeta_max * (1.0 + 1e-12)) feasible.push_back(std::min(z, zeta_max));
  }
  if (feasible.empty()) throw ConfigError("no zeta grid point lies in [1, tau_c/K]");
  std::sort(feasible.begin(), feasible.end());

  NetworkParams p = params;
  double best_zeta = feasible.front();
  double best_se = -1.0;
  for (double z : feasible) {
    p.zeta = z;
    const double se = se_lower_bound(mu, p, scheme);
    if (se > best_se) {
      best_se = se;
      best_zeta = z;
    }
  }
  return best_zeta;
}

double optimal_zeta_exhaustive(const PathLossModel& model, const NetworkParams& params, Scheme scheme,
                               std::span<const double> zeta_grid) {
  return optimal_zeta_exhaustive(mu_coefficients(model, params.lambda_km2), params, scheme, zeta_grid);
}

double crossover_antenna_ratio(const MuCoefficients& mu, const NetworkParams& params, Scheme scheme) {
  params.validate_without_m();
  require_positive_mu2(mu);
  const double a = big_a(mu.mu1, params);
  const double pc = mu.mu2 / params.zeta;
  if (scheme == Scheme::kMR) return (a * (1.0 + mu.mu1) + pc) / pc;
  return 1.0 + ((a - 1.0) + a * mu.mu1) / pc;
}

double crossover_antenna_ratio(const PathLossModel& model, const NetworkParams& params, Scheme scheme) {
  params.validate_without_m();
  return crossover_antenna_ratio(mu_coefficients(model, params.lambda_km2), params, scheme);
}

double area_se(const MuCoefficients& mu, const NetworkParams& params, Scheme scheme) {
  return params.lambda_km2 * params.k * se_lower_bound(mu, params, scheme);
}

double area_se(const PathLossModel& model, const NetworkParams& params, Scheme scheme) {
  params.validate();
  return area_se(mu_coefficients(model, params.lambda_km2), params, scheme);
}

}  // namespace densemimo
