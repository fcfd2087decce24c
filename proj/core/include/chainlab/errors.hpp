#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chainlab {

// Violated precondition or malformed input (wrong kind, bad dimensions,
// out-of-range parameters). These indicate caller bugs, not data.
class ContractViolation : public std::invalid_argument {
public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

// A computation that ran but failed numerically (divergence, missing
// stationary law, unresolvable fit, coefficient overflow).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// Trajectory left the admissible region (non-finite or |coordinate| beyond
// the blow-up threshold). Carries the step index and offending state.
class BlowUpError : public NumericalError {
public:
  BlowUpError(const std::string& what, long step, std::vector<double> state)
      : NumericalError(what), step(step), state(std::move(state)) {}

  long step;
  std::vector<double> state;
};

}  // namespace chainlab
