#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the region where an expression is defined
/// (mirror collision, |beta| beyond a closed-form cap, bad mode index).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gamma < 0: the two-mode diagonalizing transformations stop being unitary.
class BoundViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A quantity that must stay finite or nonzero does not (rho <= 0,
/// chi_plus at beta = 0, singular sigma).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Step halving failed to reach the requested accuracy.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// A structure-preservation monitor tripped during time stepping.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what + " at t = " + std::to_string(time)), time_(time) {}

  double time() const { return time_; }

 private:
  double time_;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Complex normal-mode frequencies: the quadratic form generates unstable dynamics.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace casimir
