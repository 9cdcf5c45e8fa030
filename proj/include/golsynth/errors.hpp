#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace golsynth {

enum class ErrorKind {
  UndeclaredAction,
  ArityMismatch,
  UnboundVariable,
  MembershipOutsideActionContext,
  UnresolvedPickVariable,
  UnmappedObservableFluent,
  NoMappingForAction,
  BoundExceeded,
  BisimulationBroken,
  NonMonotone,
  UnboundSOVariable,
  NotRealizable,
  IllegalTargetMove,
  NotInWinningRelation,
  SyntaxError,
  UndeclaredSymbol,
  InvalidProblem,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UndeclaredAction: return "UndeclaredAction";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::MembershipOutsideActionContext: return "MembershipOutsideActionContext";
    case ErrorKind::UnresolvedPickVariable: return "UnresolvedPickVariable";
    case ErrorKind::UnmappedObservableFluent: return "UnmappedObservableFluent";
    case ErrorKind::NoMappingForAction: return "NoMappingForAction";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::BisimulationBroken: return "BisimulationBroken";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::UnboundSOVariable: return "UnboundSOVariable";
    case ErrorKind::NotRealizable: return "NotRealizable";
    case ErrorKind::IllegalTargetMove: return "IllegalTargetMove";
    case ErrorKind::NotInWinningRelation: return "NotInWinningRelation";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
  }
  return "Error";
}

}  // namespace golsynth
