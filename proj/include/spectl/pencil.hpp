#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "spectl/linalg.hpp"

namespace spectl {

/// cond(V_r) above this marks a decomposition as ill-conditioned. The result
/// is still returned; downstream identities just lose digits.
inline constexpr double kIllConditionedThreshold = 1e12;

/// Eigenvalues with |Im| at or below this are treated as real.
inline double imag_tolerance(Complex lambda) {
  return 1e-12 * std::max(1.0, std::abs(lambda));
}

inline double deviation(Complex lambda) { return std::abs(Complex(1.0, 0.0) - lambda); }

/// The matrix pair (A, M): A is the system operator, M the fine-space
/// preconditioner. M is factored once on construction.
class Pencil {
 public:
  Pencil(CMatrix a, CMatrix m, Field field);

  static Pencil from_real(const RMatrix& a, const RMatrix& m);
  /// Field is Real when every entry of A and M has zero imaginary part.
  static Pencil from_complex(CMatrix a, CMatrix m);

  const CMatrix& a() const noexcept { return a_; }
  const CMatrix& m() const noexcept { return m_; }
  Index size() const noexcept { return a_.rows(); }
  Field field() const noexcept { return field_; }
  const LuFactor& m_factor() const noexcept { return m_lu_; }

 private:
  CMatrix a_;
  CMatrix m_;
  Field field_;
  LuFactor m_lu_;
};

/// Right/left generalized eigenvectors of (A, M) in deviation order.
///
/// Scaling convention: V_l = M^{-*} V_r^{-*}, so V_l^* M V_r = I and
/// V_l^* A V_r = diag(lambdas). Columns of V_r have unit 2-norm with their
/// largest-magnitude entry real and positive; for real pencils conjugate
/// eigenvalue pairs are adjacent (+Im first) with literally conjugate columns.
struct GeneralizedEigenDecomposition {
  CMatrix right;
  CMatrix left;
  CMatrix right_inverse;
  CVector lambdas;
  /// ordering[i] is the eigensolver output index placed at position i.
  std::vector<Index> ordering;
  double cond_right = 1.0;
  bool ill_conditioned = false;
  Field field = Field::Complex;

  Index size() const noexcept { return lambdas.size(); }
  double deviation(Index i) const { return spectl::deviation(lambdas(i)); }
};

GeneralizedEigenDecomposition factor_pencil(const Pencil& pencil);

/// Permutation sorting by |1 - lambda| descending. Ties go to smaller Re,
/// then larger Im; conjugate pairs are then pulled adjacent, +Im first.
std::vector<Index> deviation_order(std::span<const Complex> lambdas);
std::vector<Index> deviation_order(const CVector& lambdas);

struct BiorthogonalityReport {
  double offdiag_a = 0.0;  // max |(V_l^* A V_r)_ij|, i != j
  double offdiag_m = 0.0;
  double diag_error_a = 0.0;  // max |(V_l^* A V_r)_ii - lambda_i|
  double diag_error_m = 0.0;  // max |(V_l^* M V_r)_ii - 1|

  double worst() const {
    return std::max({offdiag_a, offdiag_m, diag_error_a, diag_error_m});
  }
};

BiorthogonalityReport verify_biorthogonality(const GeneralizedEigenDecomposition& ged,
                                             const Pencil& pencil);

/// ||A V_r - M V_r diag(lambdas)||_F / ||A||_F.
double reconstruction_residual(const GeneralizedEigenDecomposition& ged, const Pencil& pencil);

}  // namespace spectl
