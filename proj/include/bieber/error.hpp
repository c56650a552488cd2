#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bieber {

enum class ErrorKind {
  OutOfRange,
  NotSquarefree,
  NotCoprime,
  Overflow,
  IllDefinedAction,
  NotAGroupAction,
  EnumerationBoundExceeded,
  EvenSpecialPrime,
  PrimeNotInModulus,
  ParseError,
  ValidationError,
  DuplicateConductor,
  MissingConductor,
  DecompositionFailure,
  BoundExceeded,
  InternalNonInteger,
  UnknownClassLabel,
  ContextMismatch,
  NotFaithful,
  OrderMismatch,
  InconsistentCensus,
  NoBieberbachGroup,
  NotSpecial,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::IllDefinedAction: return "IllDefinedAction";
    case ErrorKind::NotAGroupAction: return "NotAGroupAction";
    case ErrorKind::EnumerationBoundExceeded: return "EnumerationBoundExceeded";
    case ErrorKind::EvenSpecialPrime: return "EvenSpecialPrime";
    case ErrorKind::PrimeNotInModulus: return "PrimeNotInModulus";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::DuplicateConductor: return "DuplicateConductor";
    case ErrorKind::MissingConductor: return "MissingConductor";
    case ErrorKind::DecompositionFailure: return "DecompositionFailure";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::InternalNonInteger: return "InternalNonInteger";
    case ErrorKind::UnknownClassLabel: return "UnknownClassLabel";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::NotFaithful: return "NotFaithful";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::InconsistentCensus: return "InconsistentCensus";
    case ErrorKind::NoBieberbachGroup: return "NoBieberbachGroup";
    case ErrorKind::NotSpecial: return "NotSpecial";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bieber
