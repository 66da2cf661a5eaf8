#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spectl {

enum class ErrorKind {
  SingularM,
  NotDiagonalizable,
  EigenSolverFailure,
  DimensionMismatch,
  BadCoarseDim,
  NotRealPencil,
  ResidualImaginary,
  RankDeficientTransfer,
  SingularBasisChange,
  CholeskyFailure,
  SingularCoarseOperator,
  ProjectionDefect,
  ZeroDiagonal,
  SingularBlock,
  InconsistentBlockColoring,
  InvalidPartition,
  InvalidArgument,
  ParseError,
  UnsupportedField,
  IoError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace spectl
