#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

#include "spectl/error.hpp"

namespace spectl {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

enum class Field { Real, Complex };

std::string_view to_string(Field field) noexcept;

/// Relative pivot floor used when deciding whether a square matrix is
/// numerically invertible: min |u_ii| must exceed floor * max |a_ij|.
inline constexpr double kPivotFloor = 1e-14;

/// Pivot floor for coarse operators R^* A P.
inline constexpr double kCoarsePivotFloor = 1e-12;

/// Partial-pivoting LU that refuses to exist for numerically singular input.
///
/// Construction throws `Error(on_failure)` when the smallest pivot of U falls
/// below `relative_floor` times the largest entry magnitude of the input.
class LuFactor {
 public:
  LuFactor(const CMatrix& matrix, ErrorKind on_failure, double relative_floor = kPivotFloor);

  /// Returns std::nullopt instead of throwing.
  static std::optional<LuFactor> try_factor(const CMatrix& matrix,
                                            double relative_floor = kPivotFloor);

  Index size() const noexcept { return lu_.rows(); }

  CMatrix solve(const CMatrix& rhs) const;
  // Returns (A^*)^{-1} rhs.
  CMatrix solve_adjoint(const CMatrix& rhs) const;
  CMatrix inverse() const;

  /// Reciprocal one-norm condition number estimate.
  double rcond() const { return lu_.rcond(); }

  /// Ratio min|u_ii| / max|a_ij|.
  double pivot_ratio() const noexcept { return pivot_ratio_; }

 private:
  explicit LuFactor(const CMatrix& matrix);

  Eigen::PartialPivLU<CMatrix> lu_;
  double pivot_ratio_ = 0.0;
};

double max_abs(const CMatrix& m);

/// Largest |Im a_ij|.
double max_imag(const CMatrix& m);

bool is_real(const CMatrix& m, double tolerance = 0.0);

Index numerical_rank(const CMatrix& m, double relative_tolerance = 1e-12);

double largest_singular_value(const CMatrix& m);

inline CMatrix to_complex(const RMatrix& m) { return m.cast<Complex>(); }

}  // namespace spectl
