#pragma once

#include <stdexcept>
#include <string>

namespace affine {

enum class ErrorKind {
  unknown_symbol,
  arity_mismatch,
  variable_out_of_range,
  budget_exceeded,
  not_a_congruence,
  signature_mismatch,
  shape_mismatch,
  not_in_variety,
  not_injective,
  not_stable,
  assertion_failure,
  equivalence_violation,
  bijection_failure,
  parse_error,
  validation_error,
  usage_error,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::unknown_symbol: return "UnknownSymbol";
    case ErrorKind::arity_mismatch: return "ArityMismatch";
    case ErrorKind::variable_out_of_range: return "VariableOutOfRange";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::not_a_congruence: return "NotACongruence";
    case ErrorKind::signature_mismatch: return "SignatureMismatch";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::not_in_variety: return "NotInVariety";
    case ErrorKind::not_injective: return "NotInjective";
    case ErrorKind::not_stable: return "NotStable";
    case ErrorKind::assertion_failure: return "AssertionFailure";
    case ErrorKind::equivalence_violation: return "EquivalenceViolation";
    case ErrorKind::bijection_failure: return "BijectionFailure";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::validation_error: return "ValidationError";
    case ErrorKind::usage_error: return "UsageError";
  }
  return "Unknown";
}

/// Process exit code for an error kind.
///
/// 1: domain errors, 2: usage/parse errors, 3: budget exhaustion,
/// 4: a computed result contradicts a theorem the library relies on.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::budget_exceeded:
      return 3;
    case ErrorKind::assertion_failure:
    case ErrorKind::equivalence_violation:
    case ErrorKind::bijection_failure:
      return 4;
    case ErrorKind::parse_error:
    case ErrorKind::validation_error:
    case ErrorKind::usage_error:
    case ErrorKind::unknown_symbol:
    case ErrorKind::arity_mismatch:
    case ErrorKind::variable_out_of_range:
      return 2;
    default:
      return 1;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace affine
