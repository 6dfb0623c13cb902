#pragma once

#include <stdexcept>
#include <string>

namespace fuzzy_kernels {

enum class ErrorKind {
  InstanceTooLarge,
  MissingPosition,
  NotFibreCliques,
  FlavorMismatch,
  InvertedRange,
  PreconditionViolation,
  InvalidModel,
  NotBidirectional,
  NotThreshold,
  InvalidSequence,
  InvalidCnf,
  NotAKernel,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InstanceTooLarge: return "instance-too-large";
    case ErrorKind::MissingPosition: return "missing-position";
    case ErrorKind::NotFibreCliques: return "not-fibre-cliques";
    case ErrorKind::FlavorMismatch: return "flavor-mismatch";
    case ErrorKind::InvertedRange: return "inverted-range";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::InvalidModel: return "invalid-model";
    case ErrorKind::NotBidirectional: return "not-bidirectional";
    case ErrorKind::NotThreshold: return "not-threshold";
    case ErrorKind::InvalidSequence: return "invalid-sequence";
    case ErrorKind::InvalidCnf: return "invalid-cnf";
    case ErrorKind::NotAKernel: return "not-a-kernel";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fuzzy_kernels
