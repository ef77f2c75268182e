#pragma once

// Reference computations that share no code with the library.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

/// Adaptive Gauss-Kronrod integral of f over [a, b] (b may be +inf).
template <class F>
double integrate(F f, double a, double b, double tol = 1e-13) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

/// Q(s, x) by direct quadrature of t^(s-1) e^(-t) / Gamma(s) over [x, inf), split at the
/// mode so the integrand peak is resolved.
inline double upper_gamma_q(double s, double x) {
  auto f = [s](double t) { return std::exp((s - 1.0) * std::log(t) - t - std::lgamma(s)); };
  const double mode = std::max(s - 1.0, 0.0);
  double total = 0.0;
  double lo = x;
  if (x < mode) {
    total += integrate(f, x, mode);
    lo = mode;
  }
  const double width = std::sqrt(std::max(s, 1.0));
  const double peak = f(lo);
  // Walk right in steps of a few standard deviations until the integrand is negligible.
  for (int i = 0; i < 200 && f(lo) > 1e-22 * peak; ++i) {
    const double hi = lo + 4.0 * width;
    total += integrate(f, lo, hi);
    lo = hi;
  }
  return total;
}

/// Lambert W0 by bisection on w e^w = x for x >= 0.
inline double lambert_w0_bisect(double x) {
  double lo = 0.0;
  double hi = std::max(1.0, std::log1p(x));
  while (hi * std::exp(hi) < x) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Slopes {
  std::vector<double> radius;  // interior breakpoints, meters
  std::vector<double> alpha;
  double upsilon1;

  double gain(double d) const {
    double u = upsilon1;
    std::size_t n = 0;
    while (n < radius.size() && d >= radius[n]) {
      u *= std::pow(radius[n], alpha[n + 1] - alpha[n]);
      ++n;
    }
    return u * std::pow(d, -alpha[n]);
  }
};

/// mu_kappa = E_R[ 2 pi lambda int_R^inf (beta(x) / beta(R))^kappa x dx ] with the serving
/// distance R Rayleigh distributed, P(R > r) = exp(-pi lambda r^2). Evaluated as a double
/// integral in the substitution u = pi lambda r^2.
inline double mu_double_integral(const Slopes& m, double lambda_km2, int kappa) {
  const double lam = lambda_km2 * 1e-6;
  auto inner = [&](double r) {
    const double br = m.gain(r);
    auto g = [&](double x) { return std::pow(m.gain(x) / br, kappa) * x; };
    std::vector<double> cuts{r};
    for (double b : m.radius) {
      if (b > r) cuts.push_back(b);
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(g, cuts[i], cuts[i + 1], 1e-11);
    // Past the last cut the integrand is a power law; split geometrically for accuracy.
    double lo = cuts.back();
    for (int i = 0; i < 4; ++i) {
      total += integrate(g, lo, lo * 8.0, 1e-11);
      lo *= 8.0;
    }
    return 2.0 * std::numbers::pi * lam * (total + integrate(g, lo, std::numeric_limits<double>::infinity(), 1e-11));
  };
  auto outer = [&](double u) {
    const double r = std::sqrt(u / (std::numbers::pi * lam));
    return std::exp(-u) * inner(r);
  };
  std::vector<double> cuts{0.0};
  for (double b : m.radius) cuts.push_back(std::numbers::pi * lam * b * b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  double lo = 0.0;
  for (double c : cuts) {
    if (c > lo && c < 60.0) {
      total += integrate(outer, lo, c, 1e-10);
      lo = c;
    }
  }
  return total + integrate(outer, lo, 60.0, 1e-10);
}

/// Asymptotic rate (1 - zeta K / tau_c) log2(1 + zeta / mu2).
inline double asymptotic_rate(double mu2, double zeta, int k, double tau_c) {
  return (1.0 - zeta * k / tau_c) * std::log2(1.0 + zeta / mu2);
}

/// Golden-section maximizer of the asymptotic rate over zeta in [1, tau_c / K], refined
/// from a dense grid.
inline double best_zeta(double mu2, int k, double tau_c) {
  const double hi_limit = tau_c / k;
  double best = 1.0;
  double best_val = -1.0;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double z = 1.0 + (hi_limit - 1.0) * i / n;
    const double v = asymptotic_rate(mu2, z, k, tau_c);
    if (v > best_val) {
      best_val = v;
      best = z;
    }
  }
  const double step = (hi_limit - 1.0) / n;
  double a = std::max(1.0, best - step);
  double b = std::min(hi_limit, best + step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (asymptotic_rate(mu2, c, k, tau_c) > asymptotic_rate(mu2, d, k, tau_c)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracle
