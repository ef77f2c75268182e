#pragma once

namespace densemimo::specfun {

/// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).
///
/// Requires s > 0 and x >= 0; x = +inf yields exactly 0. Uses the power series of
/// P(s, x) for x < s + 1 and a Lentz continued fraction for Q(s, x) otherwise.
/// Throws DomainError for s <= 0, x < 0 or NaN arguments.
[[nodiscard]] double upper_gamma_regularized(double s, double x);

/// Regularized lower incomplete gamma P(s, x) = 1 - Q(s, x), computed directly so
/// that small values keep full relative precision.
[[nodiscard]] double lower_gamma_regularized(double s, double x);

/// Non-regularized upper incomplete gamma Gamma(s, x) = Gamma(s) * Q(s, x).
[[nodiscard]] double upper_gamma(double s, double x);

/// Principal branch W0 of the Lambert function: the w >= -1 solving w * exp(w) = x.
/// Throws DomainError for x < -1/e or NaN.
[[nodiscard]] double lambert_w0(double x);

}  // namespace densemimo::specfun
