#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rrw {

enum class ErrorKind {
  SyntaxError,
  RangeViolation,
  NonIsolatedFixedPoints,
  InvalidParameter,
  HorizonTooLarge,
  RegimeUndecidable,
  UnsupportedRegime,
  PreconditionOrder,
  IntegralityViolation,
  SymmetryViolation,
  NotLinear,
  HypothesisUnmet,
  NoCrossing,
  BudgetExhausted,
  MonotonicityViolation,
  SchemaError,
  UsageError,
};

std::string_view error_kind_name(ErrorKind kind);

// All library failures surface as this exception; `kind()` is stable and is
// what the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& detail)
      : Error(ErrorKind::SyntaxError,
              detail + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

inline std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::NonIsolatedFixedPoints: return "NonIsolatedFixedPoints";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorKind::RegimeUndecidable: return "RegimeUndecidable";
    case ErrorKind::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorKind::PreconditionOrder: return "PreconditionOrder";
    case ErrorKind::IntegralityViolation: return "IntegralityViolation";
    case ErrorKind::SymmetryViolation: return "SymmetryViolation";
    case ErrorKind::NotLinear: return "NotLinear";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace rrw
