#include "spectl/error.hpp"

namespace spectl {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularM: return "SingularM";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadCoarseDim: return "BadCoarseDim";
    case ErrorKind::NotRealPencil: return "NotRealPencil";
    case ErrorKind::ResidualImaginary: return "ResidualImaginary";
    case ErrorKind::RankDeficientTransfer: return "RankDeficientTransfer";
    case ErrorKind::SingularBasisChange: return "SingularBasisChange";
    case ErrorKind::CholeskyFailure: return "CholeskyFailure";
    case ErrorKind::SingularCoarseOperator: return "SingularCoarseOperator";
    case ErrorKind::ProjectionDefect: return "ProjectionDefect";
    case ErrorKind::ZeroDiagonal: return "ZeroDiagonal";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::InconsistentBlockColoring: return "InconsistentBlockColoring";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace spectl
