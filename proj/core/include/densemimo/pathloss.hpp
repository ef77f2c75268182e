#pragma once

#include <span>
#include <vector>

namespace densemimo {

/// N-slope distance-dependent path loss.
///
/// Slope n (1-based) covers distances [R_{n-1}, R_n) with R_0 = 0 and R_N = +inf, and
/// evaluates beta(d) = upsilon_n * d^(-alpha_n). Only upsilon_1 is free; the remaining
/// gains are fixed by continuity at every interior breakpoint:
///   upsilon_{n+1} = upsilon_n * R_n^(alpha_{n+1} - alpha_n).
///
/// Distances are in meters, gains are linear. Instances are immutable.
class PathLossModel {
 public:
  /// Builds a model from the interior breakpoints R_1..R_{N-1} (meters), the exponents
  /// alpha_1..alpha_N and the reference gain upsilon_1. Throws ModelError on any
  /// invariant violation.
  static PathLossModel create(std::vector<double> breakpoints_m, std::vector<double> alphas,
                              double upsilon1);

  /// As create(), but additionally checks caller-supplied gains upsilon_1..upsilon_N
  /// against the continuity rule (relative tolerance 1e-12).
  static PathLossModel create_with_upsilons(std::vector<double> breakpoints_m,
                                            std::vector<double> alphas,
                                            std::vector<double> upsilons);

  static PathLossModel single_slope(double alpha, double upsilon1 = 1.0);

  /// Large-scale fading coefficient at distance d > 0. Throws DomainError for d <= 0 or NaN.
  [[nodiscard]] double beta(double distance_m) const;

  /// 0-based index of the slope containing d.
  [[nodiscard]] std::size_t slope_index(double distance_m) const;

  [[nodiscard]] std::size_t slopes() const noexcept { return alphas_.size(); }
  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] std::span<const double> alphas() const noexcept { return alphas_; }
  [[nodiscard]] std::span<const double> upsilons() const noexcept { return upsilons_; }

  /// Inner radius R_{n-1} of 0-based slope n.
  [[nodiscard]] double inner_radius(std::size_t n) const noexcept;
  /// Outer radius R_n of 0-based slope n; +inf for the last slope.
  [[nodiscard]] double outer_radius(std::size_t n) const noexcept;

  friend bool operator==(const PathLossModel&, const PathLossModel&) = default;

 private:
  PathLossModel(std::vector<double> breakpoints, std::vector<double> alphas,
                std::vector<double> upsilons);

  std::vector<double> breakpoints_;  // interior only, strictly increasing
  std::vector<double> alphas_;
  std::vector<double> upsilons_;
};

/// Two-slope urban-micro surrogate: R_1 = 100 m, alpha = (2.1, 4), upsilon_1 = 8.3e-4.
/// upsilon_2 follows from continuity (~5.2369).
PathLossModel make_dual_slope_default();

}  // namespace densemimo
