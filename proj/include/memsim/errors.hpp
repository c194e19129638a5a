#pragma once

#include <stdexcept>
#include <string>

namespace memsim {

/// Bad parameters, malformed files, mismatched drive/element pairs.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// State component outside its declared bounds.
class DomainError : public InputError {
public:
  using InputError::InputError;
};

/// Integration, root-finding or steady-state detection failed.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what, double time = 0.0)
      : std::runtime_error(what), time_(time) {}

  /// Simulated time at which the failure was detected (0 when not applicable).
  double time() const noexcept { return time_; }

private:
  double time_;
};

} // namespace memsim
