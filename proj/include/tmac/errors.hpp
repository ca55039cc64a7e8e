#pragma once

#include <stdexcept>
#include <string>

namespace tmac {

// Invalid configuration value. field() names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inconsistent dimensions between the parts of a problem.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Simplex did not terminate within its pivot budget.
class IterationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gradient descent produced a non-finite loss.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what),
        step_(step) {}

  int step() const noexcept { return step_; }

 private:
  int step_;
};

// A solver output broke an invariant it is supposed to guarantee.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tmac
