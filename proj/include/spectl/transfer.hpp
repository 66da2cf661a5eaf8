#pragma once

#include <string>
#include <vector>

#include "spectl/pencil.hpp"

namespace spectl {

/// Interpolation P and restriction R (applied as R^*), both n x n_c.
class TransferPair {
 public:
  /// Throws DimensionMismatch, InvalidArgument (imaginary entries with
  /// field = Real) or RankDeficientTransfer.
  TransferPair(CMatrix p, CMatrix r, Field field);

  const CMatrix& p() const noexcept { return p_; }
  const CMatrix& r() const noexcept { return r_; }
  Index fine_size() const noexcept { return p_.rows(); }
  Index coarse_size() const noexcept { return p_.cols(); }
  Field field() const noexcept { return field_; }

 private:
  CMatrix p_;
  CMatrix r_;
  Field field_;
};

/// Diagonal of the CF-split weight D in N = V_r^{-*} D^* D V_r^{-1}.
struct NormSpec {
  CVector d;
  bool real_mode = false;

  static NormSpec identity(Index n, bool real_mode = false);

  /// Throws InvalidArgument when an entry is zero, or (real_mode) when an
  /// entry is not real positive or differs across a conjugate pair.
  void validate(const GeneralizedEigenDecomposition& ged) const;
};

struct BasisChange {
  CMatrix b_p;
  CMatrix b_r;

  /// Throws SingularBasisChange if either factor is not invertible.
  BasisChange(CMatrix b_p, CMatrix b_r);
};

/// P = V_r(:, 1:n_c), R = V_l(:, 1:n_c).
TransferPair optimal_complex_transfers(const GeneralizedEigenDecomposition& ged, Index n_c);

struct RealTransfers {
  TransferPair pair;
  Index effective_n_c;
  std::vector<std::string> warnings;
};

/// Real-valued transfers with the same ranges as the complex ones. A conjugate
/// pair {v, conj v} contributes Re v + Im v and Re v - Im v. If n_c would split
/// a pair, n_c grows by one and a warning is attached.
RealTransfers optimal_real_transfers(const GeneralizedEigenDecomposition& ged, Index n_c);

/// Index n_c after growing past a split conjugate pair (0-based positions).
Index pair_safe_coarse_size(const CVector& lambdas, Index n_c);

TransferPair apply_basis_change(const TransferPair& tp, const BasisChange& bc);

/// N = (D V_r^{-1})^* (D V_r^{-1}), symmetrized. Throws CholeskyFailure if the
/// result is not numerically positive definite.
CMatrix n_norm_matrix(const NormSpec& spec, const GeneralizedEigenDecomposition& ged);

/// N = V_r^{-*} G V_r^{-1} for a general HPD weight G = D~^* D~.
CMatrix n_norm_matrix(const CMatrix& weight, const GeneralizedEigenDecomposition& ged);

/// ||N Pi - Pi^* N||_max.
double check_pi_orthogonal(const CMatrix& pi, const CMatrix& n);

/// Largest coupling of V_r^* N V_r between the first n_c indices and the rest.
double cf_block_defect(const CMatrix& n, const GeneralizedEigenDecomposition& ged, Index n_c);

}  // namespace spectl
