#pragma once

#include <stdexcept>
#include <string>

namespace vortexem {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Closed form requested for a mode it does not cover (n != 0).
class UnsupportedModeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Field requested at the point charge location.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The azimuthal asymmetry has no meaning for ell = 0.
class UndefinedAsymmetryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical integration did not reach the requested tolerance. The best
/// estimate reached before the budget ran out is kept.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

}  // namespace vortexem
