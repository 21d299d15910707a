#pragma once

#include <stdexcept>
#include <string>

namespace unc {

enum class ErrorKind {
  DimensionMismatch,
  NotHermitian,
  NotNormalized,
  NotOrthogonal,
  NotAnchored,
  DegenerateVariance,
  OverlapTooSmall,
  OutOfRange,
  InvalidArgument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::NotHermitian: return "operator is not Hermitian";
    case ErrorKind::NotNormalized: return "state is not normalized";
    case ErrorKind::NotOrthogonal: return "state is not orthogonal to the anchor";
    case ErrorKind::NotAnchored: return "basis is not anchored at the state";
    case ErrorKind::DegenerateVariance: return "degenerate variance";
    case ErrorKind::OverlapTooSmall: return "post-selection overlap below threshold";
    case ErrorKind::OutOfRange: return "argument out of range";
    case ErrorKind::InvalidArgument: return "invalid argument";
  }
  return "unknown error";
}

/// Precondition failure raised by the numerical core.
class Error : public std::invalid_argument {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::invalid_argument(std::string(to_string(kind)) +
                              (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace unc
