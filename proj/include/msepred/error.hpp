#pragma once

#include <stdexcept>
#include <string>

namespace msepred {

/// Argument outside the mathematical domain of an operation
/// (non-positive variance, parameter off its support, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A caller-supplied function broke its documented contract.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Iterative numerics ran out of budget. Carries the best estimate found.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// Covariance with an eigenvalue below the PSD tolerance.
class NotPsdError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Too many estimator failures in a Monte Carlo batch.
class MonteCarloAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace msepred
