#pragma once

#include <stdexcept>
#include <string>

namespace entmin {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};

struct UnknownEntropy : Error {
  using Error::Error;
};

struct NonpositiveWeightFunction : Error {
  using Error::Error;
};

/// conjugate_numeric could neither bracket a maximizer nor certify
/// unboundedness within its iteration budget.
struct BracketFailure : Error {
  using Error::Error;
};

struct NotAYoungFunction : Error {
  using Error::Error;
};

/// The Gram matrix of the moment map is numerically singular, so the
/// adjoint fails to be injective.
struct DegenerateMomentMap : Error {
  using Error::Error;
};

/// A dual point left the effective domain of the integrand.
struct DomainViolation : Error {
  using Error::Error;
};

/// A positive marginal target faces a zero kernel slice.
struct ZeroDenominator : Error {
  using Error::Error;
};

struct NotConverged : Error {
  NotConverged(const std::string& msg, int iterations_done)
      : Error(msg), iterations(iterations_done) {}
  int iterations;
};

/// The brute-force oracle could not parameterize the feasible set.
struct InfeasibleParameterization : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace entmin
