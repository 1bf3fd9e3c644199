#include "flatband/error.hpp"

namespace flatband {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::WeakSymmetryViolation: return "WeakSymmetryViolation";
    case ErrorKind::SelfLoopZeroShift: return "SelfLoopZeroShift";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::ZeroComponent: return "ZeroComponent";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::ExplosionGuard: return "ExplosionGuard";
    case ErrorKind::DegeneratePotential: return "DegeneratePotential";
    case ErrorKind::BranchTrackingAmbiguity: return "BranchTrackingAmbiguity";
    case ErrorKind::NoNonzeroQuasiLoop: return "NoNonzeroQuasiLoop";
    case ErrorKind::NoneFound: return "NoneFound";
    case ErrorKind::ObstructionNotFound: return "ObstructionNotFound";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail) {}

}  // namespace flatband
