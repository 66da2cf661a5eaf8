#include <gtest/gtest.h>

#include "spectl/problems.hpp"
#include "spectl/transfer.hpp"
#include "spectl/two_level.hpp"
#include "spectl/verification.hpp"

namespace {

using namespace spectl;

struct Fixture {
  Pencil pencil;
  GeneralizedEigenDecomposition ged;
};

Fixture seed42() {
  auto [a, m] = random_pencil(6, 42);
  Pencil p = Pencil::from_real(a, m);
  auto ged = factor_pencil(p);
  return {std::move(p), std::move(ged)};
}

Fixture spectral(const std::vector<Complex>& lambdas, std::uint64_t seed = 5) {
  CVector l(static_cast<Index>(lambdas.size()));
  for (std::size_t i = 0; i < lambdas.size(); ++i) l(static_cast<Index>(i)) = lambdas[i];
  auto [a, m] = spectral_pencil(l, seed);
  Pencil p = Pencil::from_real(a, m);
  auto ged = factor_pencil(p);
  return {std::move(p), std::move(ged)};
}

// Largest sine of the principal angles between two column spans.
double subspace_gap(const CMatrix& x, const CMatrix& y) {
  const CMatrix qx = Eigen::HouseholderQR<CMatrix>(x).householderQ() *
                     CMatrix::Identity(x.rows(), x.cols());
  const CMatrix qy = Eigen::HouseholderQR<CMatrix>(y).householderQ() *
                     CMatrix::Identity(y.rows(), y.cols());
  return largest_singular_value(qy - qx * (qx.adjoint() * qy));
}

TEST(TransferPair, Validation) {
  EXPECT_THROW(TransferPair(CMatrix::Identity(3, 2), CMatrix::Identity(3, 1), Field::Complex),
               Error);
  CMatrix p = CMatrix::Identity(3, 2);
  p.col(1).setZero();
  try {
    TransferPair(p, CMatrix::Identity(3, 2), Field::Complex);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficientTransfer);
  }
  CMatrix c = CMatrix::Identity(3, 1);
  c(0, 0) = Complex(1.0, 1.0);
  EXPECT_THROW(TransferPair(c, c, Field::Real), Error);
}

TEST(OptimalComplex, FullCoarseSpaceGivesIdentityProjection) {
  const auto f = seed42();
  const TransferPair tp = optimal_complex_transfers(f.ged, 6);
  EXPECT_EQ(max_abs(tp.p() - f.ged.right), 0.0);
  EXPECT_EQ(max_abs(tp.r() - f.ged.left), 0.0);
  const CMatrix pi = coarse_projection(f.pencil, tp);
  EXPECT_LT(max_abs(pi - CMatrix::Identity(6, 6)), 1e-12);
  const TwoLevelOperator tl(f.pencil, tp, 1, 1);
  EXPECT_LT(max_abs(error_propagator(tl)), 1e-12);
}

TEST(OptimalComplex, BadCoarseDim) {
  const auto f = seed42();
  for (Index nc : {Index{0}, Index{7}}) {
    try {
      optimal_complex_transfers(f.ged, nc);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadCoarseDim);
    }
  }
}

TEST(OptimalComplex, IdentityPencilSingleColumn) {
  const Pencil p = Pencil::from_real(RMatrix::Identity(3, 3), RMatrix::Identity(3, 3));
  const auto ged = factor_pencil(p);
  const TransferPair tp = optimal_complex_transfers(ged, 1);
  EXPECT_EQ(max_abs(tp.p() - ged.right.leftCols(1)), 0.0);
  EXPECT_EQ(predicted_bound(ged, 1, 1, 1), 0.0);
}

TEST(OptimalComplex, Seed42NormMatchesBound) {
  const auto f = seed42();
  const TwoLevelOperator tl(f.pencil, optimal_complex_transfers(f.ged, 2), 1, 1);
  const double bound = std::pow(std::abs(1.0 - f.ged.lambdas(2)), 2);
  EXPECT_NEAR(n_norm_of(error_propagator(tl), NormSpec::identity(6), f.ged), bound, 1e-8);
}

TEST(OptimalReal, AllRealSpectrumCopiesEigenvectors) {
  const auto f = spectral({3.0, -0.5, 2.0, 0.3, 1.2});
  const RealTransfers rt = optimal_real_transfers(f.ged, 3);
  EXPECT_EQ(rt.effective_n_c, 3);
  EXPECT_TRUE(rt.warnings.empty());
  EXPECT_EQ(rt.pair.field(), Field::Real);
  EXPECT_LT(max_abs(rt.pair.p() - f.ged.right.leftCols(3)), 1e-14);
  const TransferPair ct = optimal_complex_transfers(f.ged, 3);
  EXPECT_LT(subspace_gap(rt.pair.r(), ct.r()), 1e-8);
}

TEST(OptimalReal, TwoByTwoConjugatePairSpansSameSpace) {
  RMatrix a(2, 2);
  a << 0.5, 0.75, -0.3, 0.5;  // eigenvalues 0.5 +- i sqrt(0.225)
  const Pencil p = Pencil::from_real(a, RMatrix::Identity(2, 2));
  const auto ged = factor_pencil(p);
  ASSERT_GT(std::abs(ged.lambdas(0).imag()), 0.1);
  const RealTransfers rt = optimal_real_transfers(ged, 2);
  EXPECT_TRUE(is_real(rt.pair.p()));
  CMatrix stacked(2, 6);
  stacked << rt.pair.p(), to_complex(ged.right.real()), to_complex(ged.right.imag());
  EXPECT_EQ(numerical_rank(stacked, 1e-10), 2);
}

TEST(OptimalReal, SplitPairGrowsCoarseSpace) {
  // Deviations 2, then a pair at deviation ~1.41, so n_c = 2 bisects it.
  const auto f = spectral({3.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 0.5, 1.1, 0.8});
  ASSERT_GT(f.ged.lambdas(1).imag(), 0.0);
  ASSERT_EQ(f.ged.lambdas(2), std::conj(f.ged.lambdas(1)));
  const RealTransfers rt = optimal_real_transfers(f.ged, 2);
  EXPECT_EQ(rt.effective_n_c, 3);
  EXPECT_EQ(rt.warnings.size(), 1u);
  EXPECT_EQ(rt.pair.coarse_size(), 3);
  EXPECT_EQ(pair_safe_coarse_size(f.ged.lambdas, 3), 3);
}

TEST(OptimalReal, Seed42OddCoarseSizeSplitsPair) {
  const auto f = seed42();
  ASSERT_EQ(f.ged.lambdas(1), std::conj(f.ged.lambdas(0)));
  for (Index nc : {Index{1}, Index{3}}) {
    const RealTransfers rt = optimal_real_transfers(f.ged, nc);
    EXPECT_EQ(rt.effective_n_c, nc + 1);
    EXPECT_EQ(rt.warnings.size(), 1u);
  }
}

TEST(OptimalReal, RangeMatchesComplexTransfers) {
  const auto f = seed42();
  for (Index nc : {Index{2}, Index{4}}) {
    const RealTransfers rt = optimal_real_transfers(f.ged, nc);
    ASSERT_EQ(rt.effective_n_c, nc);
    const TransferPair ct = optimal_complex_transfers(f.ged, nc);
    EXPECT_LT(subspace_gap(rt.pair.p(), ct.p()), 1e-8);
    EXPECT_LT(subspace_gap(rt.pair.r(), ct.r()), 1e-8);
  }
}

TEST(OptimalReal, RejectsComplexPencil) {
  CMatrix a = CMatrix::Identity(2, 2);
  a(0, 1) = Complex(0.0, 0.5);
  a(1, 1) = 2.0;
  const auto ged = factor_pencil(Pencil::from_complex(a, CMatrix::Identity(2, 2) * 2.0));
  try {
    optimal_real_transfers(ged, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotRealPencil);
  }
}

TEST(BasisChange, IdentityIsNoOp) {
  const auto f = seed42();
  const TransferPair tp = optimal_complex_transfers(f.ged, 2);
  const TransferPair out =
      apply_basis_change(tp, BasisChange(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)));
  EXPECT_EQ(max_abs(out.p() - tp.p()), 0.0);
  EXPECT_EQ(max_abs(out.r() - tp.r()), 0.0);
}

TEST(BasisChange, RandomChangeKeepsProjection) {
  const auto f = seed42();
  const TransferPair tp = optimal_complex_transfers(f.ged, 2);
  NormalStream stream(7);
  const BasisChange bc = random_basis_change(2, Field::Real, stream);
  const CMatrix pi = coarse_projection(f.pencil, tp);
  const CMatrix pi2 = coarse_projection(f.pencil, apply_basis_change(tp, bc));
  EXPECT_LE(max_abs(pi2 - pi), 1e-10);
  const CMatrix e1 = error_propagator(TwoLevelOperator(f.pencil, tp, 1, 1));
  const CMatrix e2 =
      error_propagator(TwoLevelOperator(f.pencil, apply_basis_change(tp, bc), 1, 1));
  EXPECT_LE(max_abs(e2 - e1), 1e-10);
}

TEST(BasisChange, ScalingDoublesColumns) {
  const auto f = seed42();
  const TransferPair tp = optimal_complex_transfers(f.ged, 3);
  const CMatrix two = 2.0 * CMatrix::Identity(3, 3);
  const TransferPair out = apply_basis_change(tp, BasisChange(two, two));
  EXPECT_LT(max_abs(out.p() - 2.0 * tp.p()), 1e-15);
  EXPECT_LT(max_abs(coarse_projection(f.pencil, out) - coarse_projection(f.pencil, tp)), 1e-12);
}

TEST(BasisChange, SingularFactorThrows) {
  CMatrix s = CMatrix::Identity(2, 2);
  s(1, 1) = 0.0;
  try {
    BasisChange(s, CMatrix::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularBasisChange);
  }
}

TEST(NNorm, IdentityCase) {
  const Pencil p = Pencil::from_real(RMatrix::Identity(3, 3), RMatrix::Identity(3, 3));
  const auto ged = factor_pencil(p);
  EXPECT_LT(max_abs(n_norm_matrix(NormSpec::identity(3), ged) - CMatrix::Identity(3, 3)), 1e-14);
}

// For an SPD pair the eigenvectors are M-orthogonal, so choosing D from the
// decomposition recovers the A- and M-norms.
TEST(NNorm, HpdReducesToEnergyNorms) {
  const ProblemSpec spec = ProblemSpec::laplacian(3, 3);
  RMatrix a = hpd_laplacian(spec);
  RMatrix m = RMatrix::Zero(9, 9);
  for (Index i = 0; i < 9; ++i) m(i, i) = 4.0 + 0.2 * static_cast<double>(i);
  const Pencil p = Pencil::from_real(a, m);
  const auto ged = factor_pencil(p);

  const CMatrix da = ged.right.adjoint() * p.a() * ged.right;
  const CMatrix dm = ged.right.adjoint() * p.m() * ged.right;
  NormSpec sa{da.diagonal().cwiseSqrt(), true};
  NormSpec sm{dm.diagonal().cwiseSqrt(), true};
  for (Index i = 0; i < 9; ++i) {
    sa.d(i) = Complex(sa.d(i).real(), 0.0);
    sm.d(i) = Complex(sm.d(i).real(), 0.0);
  }
  EXPECT_LE(max_abs(n_norm_matrix(sa, ged) - p.a()), 1e-8 * max_abs(p.a()));
  EXPECT_LE(max_abs(n_norm_matrix(sm, ged) - p.m()), 1e-8 * max_abs(p.m()));
}

TEST(NormSpec, Validation) {
  const auto f = seed42();
  NormSpec zero = NormSpec::identity(6);
  zero.d(3) = 0.0;
  EXPECT_THROW(zero.validate(f.ged), Error);
  NormSpec unequal = NormSpec::identity(6, true);
  unequal.d(1) = 2.0;  // lambdas 0 and 1 are a conjugate pair
  ASSERT_GT(f.ged.lambdas(0).imag(), 0.0);
  EXPECT_THROW(unequal.validate(f.ged), Error);
  NormSpec negative = NormSpec::identity(6, true);
  negative.d(4) = negative.d(5) = -1.0;
  EXPECT_THROW(negative.validate(f.ged), Error);
}

TEST(Orthogonality, IdentityProjectionHasNoDefect) {
  const auto f = seed42();
  const CMatrix n = n_norm_matrix(NormSpec::identity(6), f.ged);
  EXPECT_EQ(check_pi_orthogonal(CMatrix::Identity(6, 6), n), 0.0);
}

TEST(Orthogonality, OptimalProjectionIsSelfAdjointInN) {
  const auto f = seed42();
  const CMatrix pi = coarse_projection(f.pencil, optimal_complex_transfers(f.ged, 2));
  const CMatrix n = n_norm_matrix(NormSpec::identity(6), f.ged);
  EXPECT_LE(check_pi_orthogonal(pi, n), 1e-9 * max_abs(n));
  EXPECT_LE(cf_block_defect(n, f.ged, 2), 1e-10);
  // Wrong norm: the Euclidean inner product.
  EXPECT_GT(check_pi_orthogonal(pi, CMatrix::Identity(6, 6)), 1e-6);
}

TEST(Orthogonality, BlockWeightIsCfBlockDiagonal) {
  const auto f = seed42();
  NormalStream stream(3);
  const CMatrix n = n_norm_matrix(random_block_weight(6, 2, stream), f.ged);
  EXPECT_LE(cf_block_defect(n, f.ged, 2), 1e-10 * max_abs(n) * f.ged.cond_right);
  const CMatrix pi = coarse_projection(f.pencil, optimal_complex_transfers(f.ged, 2));
  EXPECT_LE(check_pi_orthogonal(pi, n), 1e-9 * max_abs(n));
}

TEST(Orthogonality, NonBlockWeightBreaksOrthogonality) {
  // Reverse direction: a weight coupling C and F blocks gives a defect.
  const auto f = seed42();
  CMatrix g = CMatrix::Identity(6, 6);
  g(0, 4) = g(4, 0) = 0.5;
  const CMatrix n = n_norm_matrix(g, f.ged);
  const CMatrix pi = coarse_projection(f.pencil, optimal_complex_transfers(f.ged, 2));
  EXPECT_GT(cf_block_defect(n, f.ged, 2), 1e-3);
  EXPECT_GT(check_pi_orthogonal(pi, n), 1e-6 * max_abs(n));
}

}  // namespace
