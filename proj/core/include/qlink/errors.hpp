#pragma once

#include <stdexcept>
#include <string>

namespace qlink {

/// Thrown when an argument lies outside the physical or mathematical domain
/// of an operation (negative photon number, sub-Heisenberg noise, gain < 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A continuum integration could not proceed; carries the position of failure.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double position_km)
      : std::runtime_error(what), position_km_(position_km) {}

  double position_km() const noexcept { return position_km_; }

 private:
  double position_km_;
};

/// A multistart search ended without a converged, feasible optimum.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_value)
      : std::runtime_error(what), best_value_(best_value) {}

  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

}  // namespace qlink
