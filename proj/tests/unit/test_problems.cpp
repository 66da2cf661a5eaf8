#include <cstdio>
#include <filesystem>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spectl/matrix_market.hpp"
#include "spectl/pencil.hpp"
#include "spectl/problems.hpp"
#include "spectl/smoothers.hpp"
#include "spectl/two_level.hpp"

#ifndef SPECTL_FIXTURE_DIR
#define SPECTL_FIXTURE_DIR "tests/fixtures"
#endif

namespace {

using namespace spectl;

TEST(Grid, Sizes) {
  EXPECT_EQ(GridSpec::advection(1).nx, 4);
  EXPECT_EQ(GridSpec::advection(2).ny, 8);
  EXPECT_EQ(GridSpec::wave(0).nx, 3);
  EXPECT_EQ(GridSpec::wave(2).nx, 12);
  EXPECT_THROW(GridSpec::advection(-1), Error);
}

TEST(ProblemKind, Names) {
  EXPECT_EQ(parse_problem_kind("wave"), ProblemKind::MixedWave);
  EXPECT_EQ(to_string(ProblemKind::AdvectionReaction), "advection");
  try {
    parse_problem_kind("heat");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
}

TEST(Advection, ReactionDominatedLimit) {
  ProblemSpec spec = ProblemSpec::advection(1);
  spec.alpha0 = 1e6;
  const CMatrix a = to_complex(advection_reaction_matrix(spec));
  const Smoother s = jacobi(a);
  const auto ged = factor_pencil(make_pencil(a, s));
  for (Index i = 0; i < ged.size(); ++i) EXPECT_LE(ged.deviation(i), 1e-3);
}

TEST(Advection, UpwindSignPattern) {
  const ProblemSpec spec = ProblemSpec::advection(1);
  const RMatrix a = advection_reaction_matrix(spec);
  const Index nx = spec.grid.nx;
  ASSERT_EQ(a.rows(), 16);
  for (Index j = 0; j < nx; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index k = j * nx + i;
      EXPECT_GT(a(k, k), 0.0);
      if (i > 0) EXPECT_LE(a(k, k - 1), 0.0);
      if (j > 0) EXPECT_LE(a(k, k - nx), 0.0);
      if (i + 1 < nx) EXPECT_GE(a(k, k + 1), 0.0);
      if (j + 1 < nx) EXPECT_GE(a(k, k + nx), 0.0);
      for (Index c = 0; c < a.cols(); ++c) {
        const bool neighbor = c == k || (i > 0 && c == k - 1) || (i + 1 < nx && c == k + 1) ||
                              (j > 0 && c == k - nx) || (j + 1 < nx && c == k + nx);
        if (!neighbor) EXPECT_EQ(a(k, c), 0.0);
      }
    }
  }
  // Upwind magnitude dominates the downstream one.
  EXPECT_GT(std::abs(a(5, 4)), std::abs(a(5, 6)));
}

TEST(Advection, PureUpwindIsMMatrix) {
  ProblemSpec spec = ProblemSpec::advection(1);
  spec.central_weight = 0.0;
  const RMatrix a = advection_reaction_matrix(spec);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (i != j) EXPECT_LE(a(i, j), 0.0);
}

TEST(Advection, PureReaction) {
  ProblemSpec spec = ProblemSpec::advection(1);
  spec.zero_velocity = true;
  const RMatrix a = advection_reaction_matrix(spec);
  RMatrix expect = RMatrix::Zero(16, 16);
  for (Index j = 1; j <= 4; ++j) {
    for (Index i = 1; i <= 4; ++i) {
      const double x = i / 4.0, y = j / 4.0;
      const bool inside = x >= 0.25 && x <= 0.75 && y >= 0.25 && y <= 0.75;
      expect((j - 1) * 4 + (i - 1), (j - 1) * 4 + (i - 1)) = 0.1 + (inside ? 0.9 : 0.0);
    }
  }
  EXPECT_EQ((a - expect).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Advection, RowSumWithBoundaryEqualsReaction) {
  const ProblemSpec spec = ProblemSpec::advection(2);
  const AdvectionSystem sys = advection_reaction_system(spec);
  ProblemSpec reaction = spec;
  reaction.zero_velocity = true;
  const RVector c0 = advection_reaction_matrix(reaction).diagonal();
  // The lift holds -a_ib for the eliminated inflow neighbour b (boundary value 1).
  const RVector sums = sys.a.rowwise().sum() - sys.inflow_lift;
  EXPECT_LE((sums - c0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT(sys.inflow_lift.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Advection, Nonsingular) {
  for (int r : {0, 1, 2}) {
    const CMatrix a = to_complex(advection_reaction_matrix(ProblemSpec::advection(r)));
    EXPECT_TRUE(LuFactor::try_factor(a).has_value()) << "r = " << r;
  }
}

TEST(Wave, ZeroStepIsIdentity) {
  ProblemSpec spec = ProblemSpec::wave(0, 0.0);
  const RMatrix a = mixed_wave_matrix(spec);
  ASSERT_EQ(a.rows(), 3 * 16);
  EXPECT_EQ((a - RMatrix::Identity(48, 48)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Wave, SkewPlusIdentity) {
  ProblemSpec spec = ProblemSpec::wave(0, 0.3);
  spec.constant_speed = true;
  spec.penalty = 0.0;
  const RMatrix a = mixed_wave_matrix(spec);
  const RMatrix sym = a + a.transpose();
  EXPECT_LE((sym - 2.0 * RMatrix::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff(), 1e-14);
  const Eigen::EigenSolver<RMatrix> es(a, false);
  for (Index i = 0; i < a.rows(); ++i) EXPECT_NEAR(es.eigenvalues()(i).real(), 1.0, 1e-10);
}

TEST(Wave, LinearInStep) {
  const RMatrix a1 = mixed_wave_matrix(ProblemSpec::wave(0, 1e-3));
  const RMatrix a2 = mixed_wave_matrix(ProblemSpec::wave(0, 2e-3));
  const RMatrix id = RMatrix::Identity(a1.rows(), a1.cols());
  EXPECT_LE(((a2 - id) - 2.0 * (a1 - id)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GT((a1 - id).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Wave, NonsingularAndNonsymmetric) {
  for (double dt : {1e-3, 1.0}) {
    const RMatrix a = mixed_wave_matrix(ProblemSpec::wave(1, dt));
    EXPECT_TRUE(LuFactor::try_factor(to_complex(a)).has_value());
    EXPECT_GT((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Laplacian, SinglePoint) {
  const RMatrix a = hpd_laplacian(ProblemSpec::laplacian(1, 1));
  ASSERT_EQ(a.rows(), 1);
  EXPECT_EQ(a(0, 0), 4.0);
}

TEST(Laplacian, SpectrumMatchesAnalytic) {
  const RMatrix a = hpd_laplacian(ProblemSpec::laplacian(4, 3));
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  std::vector<std::vector<double>> dense(12, std::vector<double>(12));
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) dense[i][j] = a(i, j);
  const auto ev = oracle::symmetric_eigenvalues(dense);
  const auto ref = oracle::laplacian_2d(4, 3);
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(ev[i], ref[i], 1e-12);
}

TEST(RandomPencil, Deterministic) {
  const auto [a1, m1] = random_pencil(5, 42);
  const auto [a2, m2] = random_pencil(5, 42);
  EXPECT_EQ((a1 - a2).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((m1 - m2).cwiseAbs().maxCoeff(), 0.0);
  const auto [a3, m3] = random_pencil(5, 43);
  EXPECT_GT((a1 - a3).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SpectralPencil, PrescribedEigenvalues) {
  CVector l(5);
  l << 3.0, Complex(0.5, 2.0), Complex(0.5, -2.0), -1.0, 0.25;
  const auto [a, m] = spectral_pencil(l, 6);
  const auto ref = oracle::pencil_eigenvalues(oracle::to_dense(a), oracle::to_dense(m));
  EXPECT_LT(oracle::match_distance(ref, {l.data(), l.data() + 5}), 1e-8);
  CVector bad(2);
  bad << Complex(0.5, 2.0), 1.0;
  EXPECT_THROW(spectral_pencil(bad, 1), Error);
}

TEST(ProblemBlocks, CoverEachProblem) {
  for (const ProblemSpec& spec :
       {ProblemSpec::advection(1), ProblemSpec::wave(0, 0.1), ProblemSpec::laplacian(3, 5),
        ProblemSpec::random(7, 1)}) {
    const ProblemInstance inst = build_problem(spec);
    EXPECT_NO_THROW(inst.blocks.validate(inst.a.rows())) << inst.name;
  }
  EXPECT_EQ(problem_blocks(ProblemSpec::wave(0, 0.1), 48).blocks[1],
            (std::vector<Index>{3, 4, 5}));
  EXPECT_EQ(problem_blocks(ProblemSpec::advection(1), 16).blocks[0],
            (std::vector<Index>{0, 1, 4, 5}));
}

TEST(MatrixMarket, RoundTripSeed42) {
  const auto [a, m] = random_pencil(6, 42);
  std::stringstream buf;
  write_matrix_market(to_complex(a), buf);
  EXPECT_EQ(buf.str().rfind("%%MatrixMarket matrix coordinate real general", 0), 0u);
  const CMatrix back = read_matrix_market(buf);
  EXPECT_LE(max_abs(back - to_complex(a)), 1e-15 * max_abs(to_complex(a)));
}

TEST(MatrixMarket, ComplexRoundTripViaFile) {
  CMatrix c(2, 2);
  c << Complex(1.0, -2.0), 0.0, Complex(0.0, 1.0 / 3.0), 4.0;
  const auto path = std::filesystem::temp_directory_path() / "spectl_complex_roundtrip.mtx";
  save_matrix_market(c, path.string());
  const CMatrix back = load_matrix_market(path.string());
  std::filesystem::remove(path);
  EXPECT_LE(max_abs(back - c), 1e-16);
}

TEST(MatrixMarket, SingleEntry) {
  std::istringstream in("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2.5\n");
  const CMatrix m = read_matrix_market(in);
  ASSERT_EQ(m.rows(), 1);
  EXPECT_EQ(m(0, 0), Complex(2.5));
}

TEST(MatrixMarket, SymmetricFixtureIsMirrored) {
  const CMatrix m = load_matrix_market(std::string(SPECTL_FIXTURE_DIR) + "/laplacian3_sym.mtx");
  CMatrix expect(3, 3);
  expect << 2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0;
  EXPECT_EQ(max_abs(m - expect), 0.0);
}

TEST(MatrixMarket, Errors) {
  std::istringstream pattern("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n");
  try {
    read_matrix_market(pattern);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedField);
  }
  std::istringstream truncated("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
  EXPECT_THROW(read_matrix_market(truncated), Error);
  std::istringstream garbage("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1.0\n");
  try {
    read_matrix_market(garbage);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  try {
    load_matrix_market("/nonexistent/path.mtx");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}

}  // namespace
