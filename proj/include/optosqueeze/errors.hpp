#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace optosqueeze {

/// Invalid physical input or option; `field` names the offending quantity.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Unknown or malformed entry in a config file.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Every steady-state root fails the stability conditions.
class NoStableBranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Variance requested on a branch whose fluctuation dynamics diverge.
class UnstableBranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frequency-window escalation hit its cap before the tail converged.
class TailNotConvergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal integrator failure (panel budget, non-finite integrand).
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace optosqueeze
