#pragma once

#include <stdexcept>
#include <string>

namespace gbm {

/// Malformed or out-of-range scenario configuration. Messages carry the
/// offending line number and key where available.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A state field left its admissible box by more than solver round-off.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(const std::string& what, int step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// The linear solver failed to converge within its iteration budget.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, int step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace gbm
