#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace condensate {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. E <= mu
/// in a Bose occupation). Usually a bracketing bug upstream.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter record violates its invariants. `field` names the offending
/// entry using dotted config paths ("wire.d", "physics.beta").
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Discretization cannot represent the request (too coarse, misaligned).
class SizingError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed: non-convergence, bracket failure, or a
/// residual above tolerance. The message carries the diagnostics.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace condensate
