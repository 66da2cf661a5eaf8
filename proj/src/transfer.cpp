#include "spectl/transfer.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace spectl {

namespace {

constexpr double kImagTruncation = 1e-10;

bool opens_pair(const CVector& lambdas, Index i) {
  if (i + 1 >= lambdas.size()) return false;
  const Complex li = lambdas(i);
  return li.imag() > imag_tolerance(li) &&
         std::abs(lambdas(i + 1) - std::conj(li)) <= imag_tolerance(li);
}

void check_coarse_dim(const GeneralizedEigenDecomposition& ged, Index n_c) {
  if (n_c < 1 || n_c > ged.size()) {
    throw Error(ErrorKind::BadCoarseDim, "n_c = " + std::to_string(n_c) +
                                             " outside [1, " + std::to_string(ged.size()) + "]");
  }
}

RVector real_part_checked(const CVector& v, const char* what) {
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  const double residue = v.imag().cwiseAbs().maxCoeff();
  if (residue > kImagTruncation * scale) {
    throw Error(ErrorKind::ResidualImaginary,
                std::string(what) + " column has imaginary residue " + std::to_string(residue));
  }
  return v.real();
}

void fill_real_family(const CMatrix& vectors, const CVector& lambdas, Index count, RMatrix& out,
                      const char* what) {
  out.resize(vectors.rows(), count);
  Index i = 0;
  while (i < count) {
    if (opens_pair(lambdas, i)) {
      const CVector v = vectors.col(i);
      out.col(i) = v.real() + v.imag();
      out.col(i + 1) = v.real() - v.imag();
      i += 2;
    } else {
      out.col(i) = real_part_checked(vectors.col(i), what);
      ++i;
    }
  }
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

void require_positive_definite(const CMatrix& n) {
  Eigen::LLT<CMatrix> llt(n);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::CholeskyFailure,
                "norm matrix is not numerically positive definite");
  }
}

}  // namespace

TransferPair::TransferPair(CMatrix p, CMatrix r, Field field)
    : p_(std::move(p)), r_(std::move(r)), field_(field) {
  if (p_.rows() != r_.rows() || p_.cols() != r_.cols() || p_.cols() < 1 ||
      p_.cols() > p_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "P and R must both be n x n_c with 1 <= n_c <= n");
  }
  if (field_ == Field::Real && (!is_real(p_) || !is_real(r_))) {
    throw Error(ErrorKind::InvalidArgument, "real transfer pair with imaginary entries");
  }
  if (numerical_rank(p_) < p_.cols()) {
    throw Error(ErrorKind::RankDeficientTransfer, "P does not have full column rank");
  }
  if (numerical_rank(r_) < r_.cols()) {
    throw Error(ErrorKind::RankDeficientTransfer, "R does not have full column rank");
  }
}

NormSpec NormSpec::identity(Index n, bool real_mode) {
  return NormSpec{CVector::Ones(n), real_mode};
}

void NormSpec::validate(const GeneralizedEigenDecomposition& ged) const {
  if (d.size() != ged.size()) {
    throw Error(ErrorKind::DimensionMismatch, "NormSpec length differs from pencil size");
  }
  for (Index i = 0; i < d.size(); ++i) {
    if (d(i) == Complex(0.0, 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "NormSpec has a zero diagonal entry");
    }
  }
  if (!real_mode) return;
  for (Index i = 0; i < d.size(); ++i) {
    if (d(i).imag() != 0.0 || !(d(i).real() > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "real-mode NormSpec needs positive entries");
    }
    if (opens_pair(ged.lambdas, i) && d(i + 1) != d(i)) {
      throw Error(ErrorKind::InvalidArgument,
                  "real-mode NormSpec must repeat its entry across a conjugate pair");
    }
  }
}

BasisChange::BasisChange(CMatrix p, CMatrix r) : b_p(std::move(p)), b_r(std::move(r)) {
  if (b_p.rows() != b_p.cols() || b_r.rows() != b_r.cols() || b_p.rows() != b_r.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "basis changes must be square n_c x n_c");
  }
  LuFactor(b_p, ErrorKind::SingularBasisChange);
  LuFactor(b_r, ErrorKind::SingularBasisChange);
}

TransferPair optimal_complex_transfers(const GeneralizedEigenDecomposition& ged, Index n_c) {
  check_coarse_dim(ged, n_c);
  return TransferPair(ged.right.leftCols(n_c), ged.left.leftCols(n_c), Field::Complex);
}

Index pair_safe_coarse_size(const CVector& lambdas, Index n_c) {
  // A pair opening at position n_c - 1 would be cut in half.
  if (n_c >= 1 && n_c < lambdas.size() && opens_pair(lambdas, n_c - 1)) return n_c + 1;
  return n_c;
}

RealTransfers optimal_real_transfers(const GeneralizedEigenDecomposition& ged, Index n_c) {
  if (ged.field != Field::Real) {
    throw Error(ErrorKind::NotRealPencil, "real transfers need a real pencil");
  }
  check_coarse_dim(ged, n_c);

  const Index effective = pair_safe_coarse_size(ged.lambdas, n_c);
  std::vector<std::string> warnings;
  if (effective != n_c) {
    warnings.push_back("n_c=" + std::to_string(n_c) + " splits a conjugate pair; using n_c=" +
                       std::to_string(effective));
  }

  RMatrix p;
  RMatrix r;
  fill_real_family(ged.right, ged.lambdas, effective, p, "right");
  fill_real_family(ged.left, ged.lambdas, effective, r, "left");
  return RealTransfers{TransferPair(to_complex(p), to_complex(r), Field::Real), effective,
                       std::move(warnings)};
}

TransferPair apply_basis_change(const TransferPair& tp, const BasisChange& bc) {
  if (bc.b_p.rows() != tp.coarse_size()) {
    throw Error(ErrorKind::DimensionMismatch, "basis change size differs from n_c");
  }
  Field field = tp.field();
  if (field == Field::Real && (!is_real(bc.b_p) || !is_real(bc.b_r))) field = Field::Complex;
  return TransferPair(tp.p() * bc.b_p, tp.r() * bc.b_r, field);
}

CMatrix n_norm_matrix(const NormSpec& spec, const GeneralizedEigenDecomposition& ged) {
  spec.validate(ged);
  const CMatrix x = spec.d.asDiagonal() * ged.right_inverse;
  CMatrix n = hermitian_part(x.adjoint() * x);
  require_positive_definite(n);
  return n;
}

CMatrix n_norm_matrix(const CMatrix& weight, const GeneralizedEigenDecomposition& ged) {
  if (weight.rows() != ged.size() || weight.cols() != ged.size()) {
    throw Error(ErrorKind::DimensionMismatch, "weight matrix size differs from pencil size");
  }
  CMatrix n = hermitian_part(ged.right_inverse.adjoint() * weight * ged.right_inverse);
  require_positive_definite(n);
  return n;
}

double check_pi_orthogonal(const CMatrix& pi, const CMatrix& n) {
  if (pi.rows() != pi.cols() || n.rows() != n.cols() || pi.rows() != n.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "Pi and N must be square of equal size");
  }
  return max_abs(n * pi - pi.adjoint() * n);
}

double cf_block_defect(const CMatrix& n, const GeneralizedEigenDecomposition& ged, Index n_c) {
  check_coarse_dim(ged, n_c);
  if (n_c == ged.size()) return 0.0;
  const CMatrix g = ged.right.adjoint() * n * ged.right;
  const Index nf = ged.size() - n_c;
  return std::max(max_abs(g.topRightCorner(n_c, nf)), max_abs(g.bottomLeftCorner(nf, n_c)));
}

}  // namespace spectl
