#include "spectl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spectl {

std::string_view to_string(Field field) noexcept {
  return field == Field::Real ? "real" : "complex";
}

LuFactor::LuFactor(const CMatrix& matrix) : lu_(matrix) {
  const double scale = max_abs(matrix);
  if (scale == 0.0 || matrix.rows() == 0) {
    pivot_ratio_ = 0.0;
    return;
  }
  const auto diag = lu_.matrixLU().diagonal();
  double smallest = std::abs(diag(0));
  for (Index i = 1; i < diag.size(); ++i) smallest = std::min(smallest, std::abs(diag(i)));
  pivot_ratio_ = smallest / scale;
}

LuFactor::LuFactor(const CMatrix& matrix, ErrorKind on_failure, double relative_floor)
    : LuFactor(matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "LU factorization needs a square matrix");
  }
  if (!(pivot_ratio_ > relative_floor)) {
    throw Error(on_failure, "matrix is numerically singular (pivot ratio " +
                                std::to_string(pivot_ratio_) + ")");
  }
}

std::optional<LuFactor> LuFactor::try_factor(const CMatrix& matrix, double relative_floor) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) return std::nullopt;
  LuFactor f(matrix);
  if (!(f.pivot_ratio_ > relative_floor)) return std::nullopt;
  return f;
}

CMatrix LuFactor::solve(const CMatrix& rhs) const {
  if (rhs.rows() != size()) throw Error(ErrorKind::DimensionMismatch, "LU solve: row count");
  return lu_.solve(rhs);
}

CMatrix LuFactor::solve_adjoint(const CMatrix& rhs) const {
  if (rhs.rows() != size()) throw Error(ErrorKind::DimensionMismatch, "LU solve: row count");
  return lu_.adjoint().solve(rhs);
}

CMatrix LuFactor::inverse() const { return lu_.inverse(); }

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_imag(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.imag().cwiseAbs().maxCoeff();
}

bool is_real(const CMatrix& m, double tolerance) { return max_imag(m) <= tolerance; }

Index numerical_rank(const CMatrix& m, double relative_tolerance) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > relative_tolerance * s(0)) ++rank;
  }
  return rank;
}

double largest_singular_value(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace spectl
