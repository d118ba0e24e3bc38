#pragma once

#include <stdexcept>
#include <string>

namespace swlw {

/// A model or run was set up with parameters that violate a hypothesis of the
/// model (non-Hermitian alpha, CFL violation, support ordering, ...).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scenario file could not be parsed or validated.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver detected a runtime failure (bound violation, non-convergence).
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, long step = -1)
      : std::runtime_error(step >= 0 ? what + " (step " + std::to_string(step) + ")" : what),
        step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace swlw
