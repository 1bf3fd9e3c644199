#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flatband {

/// Every domain failure carries one of these kinds. The CLI prints the kind
/// name verbatim, so the names are part of the external contract.
enum class ErrorKind {
  WeakSymmetryViolation,
  SelfLoopZeroShift,
  EmptyGraph,
  RankMismatch,
  SizeMismatch,
  ZeroComponent,
  NonSquare,
  EmptyInput,
  ZeroPolynomial,
  EigenSolverFailure,
  DimensionTooLarge,
  ExplosionGuard,
  DegeneratePotential,
  BranchTrackingAmbiguity,
  NoNonzeroQuasiLoop,
  NoneFound,
  ObstructionNotFound,
  InvalidArgument,
  ParseError,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace flatband
