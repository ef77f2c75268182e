#include "densemimo/pathloss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "densemimo/errors.hpp"

namespace densemimo {
namespace {

constexpr double kContinuityRelTol = 1e-12;

void validate_shape(const std::vector<double>& breakpoints, const std::vector<double>& alphas) {
  if (alphas.empty()) throw ModelError("path loss model needs at least one slope");
  if (breakpoints.size() + 1 != alphas.size()) {
    throw ModelError("path loss model needs exactly one interior breakpoint fewer than exponents (got " +
                     std::to_string(breakpoints.size()) + " breakpoints, " +
                     std::to_string(alphas.size()) + " exponents)");
  }
  double previous = 0.0;
  for (double r : breakpoints) {
    if (!std::isfinite(r) || r <= previous) {
      throw ModelError("breakpoints must be finite, positive and strictly increasing");
    }
    previous = r;
  }
  double previous_alpha = 0.0;
  for (double a : alphas) {
    if (!std::isfinite(a) || a < previous_alpha) {
      throw ModelError("exponents must be finite and satisfy 0 <= alpha_1 <= ... <= alpha_N");
    }
    previous_alpha = a;
  }
  if (!(alphas.back() > 2.0)) {
    throw ModelError("the outermost exponent must exceed 2 for finite interference");
  }
}

std::vector<double> continuity_upsilons(const std::vector<double>& breakpoints,
                                        const std::vector<double>& alphas, double upsilon1) {
  std::vector<double> ups(alphas.size());
  ups[0] = upsilon1;
  for (std::size_t n = 0; n + 1 < alphas.size(); ++n) {
    ups[n + 1] = ups[n] * std::pow(breakpoints[n], alphas[n + 1] - alphas[n]);
  }
  return ups;
}

}  // namespace

PathLossModel::PathLossModel(std::vector<double> breakpoints, std::vector<double> alphas,
                             std::vector<double> upsilons)
    : breakpoints_(std::move(breakpoints)), alphas_(std::move(alphas)), upsilons_(std::move(upsilons)) {}

PathLossModel PathLossModel::create(std::vector<double> breakpoints_m, std::vector<double> alphas,
                                    double upsilon1) {
  validate_shape(breakpoints_m, alphas);
  if (!std::isfinite(upsilon1) || upsilon1 <= 0.0) {
    throw ModelError("upsilon1 must be finite and positive");
  }
  auto ups = continuity_upsilons(breakpoints_m, alphas, upsilon1);
  return PathLossModel(std::move(breakpoints_m), std::move(alphas), std::move(ups));
}

PathLossModel PathLossModel::create_with_upsilons(std::vector<double> breakpoints_m,
                                                  std::vector<double> alphas,
                                                  std::vector<double> upsilons) {
  if (upsilons.size() != alphas.size()) {
    throw ModelError("need one upsilon per slope");
  }
  auto model = create(std::move(breakpoints_m), std::move(alphas), upsilons.front());
  for (std::size_t n = 1; n < upsilons.size(); ++n) {
    const double expected = model.upsilons_[n];
    if (!std::isfinite(upsilons[n]) ||
        std::abs(upsilons[n] - expected) > kContinuityRelTol * std::abs(expected)) {
      throw ModelError("upsilon_" + std::to_string(n + 1) + " = " + std::to_string(upsilons[n]) +
                       " breaks continuity at R_" + std::to_string(n) + " (expected " +
                       std::to_string(expected) + ")");
    }
  }
  return model;
}

PathLossModel PathLossModel::single_slope(double alpha, double upsilon1) {
  return create({}, {alpha}, upsilon1);
}

std::size_t PathLossModel::slope_index(double distance_m) const {
  if (!(distance_m > 0.0)) {
    throw DomainError("path loss is singular at distance " + std::to_string(distance_m) +
                      "; distances must be > 0");
  }
  // first breakpoint strictly greater than d: d in [R_{n-1}, R_n)
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), distance_m);
  return static_cast<std::size_t>(it - breakpoints_.begin());
}

double PathLossModel::beta(double distance_m) const {
  const std::size_t n = slope_index(distance_m);
  return upsilons_[n] * std::pow(distance_m, -alphas_[n]);
}

double PathLossModel::inner_radius(std::size_t n) const noexcept {
  return n == 0 ? 0.0 : breakpoints_[n - 1];
}

double PathLossModel::outer_radius(std::size_t n) const noexcept {
  return n < breakpoints_.size() ? breakpoints_[n] : std::numeric_limits<double>::infinity();
}

PathLossModel make_dual_slope_default() {
  return PathLossModel::create({100.0}, {2.1, 4.0}, 8.3e-4);
}

}  // namespace densemimo
