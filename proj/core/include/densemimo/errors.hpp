#pragma once

#include <stdexcept>
#include <string>

namespace densemimo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A denominator of the interference-moment closed form vanishes (kappa * alpha_n == 2).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An interference moment is infinite (kappa * alpha_N <= 2).
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Zero-forcing needs more antennas than users (M > K).
class DegreesOfFreedomError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Path-loss model violates one of its invariants.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling of UE positions exceeded its proposal budget.
class SamplingStall : public Error {
 public:
  using Error::Error;
};

/// Scenario, sweep or simulation configuration is unusable.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace densemimo
