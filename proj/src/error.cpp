#include "seaforge/error.hpp"

namespace sea {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorKind::NonPeriodic: return "NonPeriodic";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::UnitViolation: return "UnitViolation";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DegenerateBound: return "DegenerateBound";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sea
