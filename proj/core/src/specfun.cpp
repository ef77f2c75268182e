#include "densemimo/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "densemimo/errors.hpp"

namespace densemimo::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIterations = 100000;

void check_gamma_args(double s, double x) {
  if (std::isnan(s) || std::isnan(x)) throw DomainError("incomplete gamma: NaN argument");
  if (!(s > 0.0)) throw DomainError("incomplete gamma: shape must be > 0, got " + std::to_string(s));
  if (x < 0.0) throw DomainError("incomplete gamma: point must be >= 0, got " + std::to_string(x));
}

// x^s e^-x / Gamma(s), evaluated in log space.
double gamma_prefactor(double s, double x) {
  return std::exp(s * std::log(x) - x - std::lgamma(s));
}

// P(s, x) by the power series; converges for every x but is used for x < s + 1.
double lower_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * gamma_prefactor(s, x);
}

// Q(s, x) by the modified Lentz continued fraction; used for x >= s + 1.
double upper_continued_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h * gamma_prefactor(s, x);
}

}  // namespace

double upper_gamma_regularized(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < s + 1.0) return 1.0 - lower_series(s, x);
  return upper_continued_fraction(s, x);
}

double lower_gamma_regularized(double s, double x) {
  check_gamma_args(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) return lower_series(s, x);
  return 1.0 - upper_continued_fraction(s, x);
}

double upper_gamma(double s, double x) {
  return std::tgamma(s) * upper_gamma_regularized(s, x);
}

double lambert_w0(double x) {
  constexpr double kBranchPoint = -1.0 / std::numbers::e;
  if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
  if (x < kBranchPoint) {
    throw DomainError("lambert_w0: argument must be >= -1/e, got " + std::to_string(x));
  }
  if (x == kBranchPoint) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  if (x > 1e300) {
    // w + ln w = ln x, Newton in log space avoids overflowing w * e^w.
    const double lx = std::log(x);
    double w = lx - std::log(lx);
    for (int i = 0; i < 50; ++i) {
      const double dw = (w + std::log(w) - lx) / (1.0 + 1.0 / w);
      w -= dw;
      if (std::abs(dw) <= 4.0 * kEps * w) break;
    }
    return w;
  }

  double w;
  if (x < -0.25) {
    // branch-point series in p = sqrt(2 (e x + 1))
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < 3.0) {
    w = std::log1p(x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int i = 0; i < 100; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0) break;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double dw = f / denom;
    w -= dw;
    if (std::abs(dw) <= 4.0 * kEps * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace densemimo::specfun
