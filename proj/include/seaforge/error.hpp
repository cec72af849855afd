#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sea {

enum class ErrorKind {
  NonMonotoneTime,
  NonPeriodic,
  MissingColumn,
  TooFewSamples,
  MissingField,
  UnitViolation,
  InvariantViolation,
  ParseError,
  DegenerateBound,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Input or invariant failure. `kind()` identifies the failure class; `what()`
/// carries a human-readable diagnostic (with line numbers for file input).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sea
