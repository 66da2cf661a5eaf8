#include "spectl/verification.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

namespace spectl {

namespace {

CMatrix draw(NormalStream& stream, Index rows, Index cols, Field field) {
  if (field == Field::Real) return to_complex(stream.matrix(rows, cols));
  const RMatrix re = stream.matrix(rows, cols);
  const RMatrix im = stream.matrix(rows, cols);
  CMatrix out(rows, cols);
  out.real() = re;
  out.imag() = im;
  return out;
}

double scale_from_normal(double z) {
  // Maps a normal draw into [0.5, 2] smoothly.
  return std::exp(std::log(2.0) * std::tanh(z));
}

constexpr int kMaxRedraws = 1000;

}  // namespace

TransferPair random_competitor(const Pencil& pencil, Index n_c, NormalStream& stream) {
  const Index n = pencil.size();
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    CMatrix p = draw(stream, n, n_c, pencil.field());
    CMatrix r = draw(stream, n, n_c, pencil.field());
    if (numerical_rank(p) < n_c || numerical_rank(r) < n_c) continue;
    if (!LuFactor::try_factor(r.adjoint() * pencil.a() * p, kCoarsePivotFloor)) continue;
    return TransferPair(std::move(p), std::move(r), pencil.field());
  }
  throw Error(ErrorKind::SingularCoarseOperator, "could not draw a nonsingular competitor");
}

BasisChange random_basis_change(Index n_c, Field field, NormalStream& stream, double max_cond) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    CMatrix bp = draw(stream, n_c, n_c, field);
    CMatrix br = draw(stream, n_c, n_c, field);
    auto fp = LuFactor::try_factor(bp);
    auto fr = LuFactor::try_factor(br);
    if (!fp || !fr || 1.0 / fp->rcond() > max_cond || 1.0 / fr->rcond() > max_cond) continue;
    return BasisChange(std::move(bp), std::move(br));
  }
  throw Error(ErrorKind::SingularBasisChange, "could not draw a well-conditioned basis change");
}

NormSpec random_norm_spec(const GeneralizedEigenDecomposition& ged, bool real_mode,
                          NormalStream& stream) {
  const Index n = ged.size();
  NormSpec spec{CVector(n), real_mode};
  for (Index i = 0; i < n; ++i) {
    const double mag = scale_from_normal(stream.next());
    if (real_mode) {
      spec.d(i) = Complex(mag, 0.0);
      const Complex li = ged.lambdas(i);
      if (li.imag() > imag_tolerance(li) && i + 1 < n) {
        spec.d(i + 1) = spec.d(i);
        ++i;
      }
    } else {
      const double phase = stream.next();
      spec.d(i) = std::polar(mag, phase);
    }
  }
  return spec;
}

CMatrix random_block_weight(Index n, Index n_c, NormalStream& stream) {
  CMatrix g = CMatrix::Zero(n, n);
  const auto fill = [&](Index offset, Index size) {
    if (size == 0) return;
    const CMatrix x = draw(stream, size, size, Field::Complex);
    g.block(offset, offset, size, size) =
        x.adjoint() * x + static_cast<double>(size) * CMatrix::Identity(size, size);
  };
  fill(0, n_c);
  fill(n_c, n - n_c);
  return g;
}

double multiset_distance(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const Index n = a.size();
  std::vector<bool> used_a(static_cast<std::size_t>(n), false);
  std::vector<bool> used_b(static_cast<std::size_t>(n), false);
  double worst = 0.0;
  for (Index round = 0; round < n; ++round) {
    Index bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      if (used_a[i]) continue;
      for (Index j = 0; j < n; ++j) {
        if (used_b[j]) continue;
        const double d = std::abs(a(i) - b(j));
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = used_b[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

CVector eigenvalues_of(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::EigenSolverFailure, "eigenvalue computation failed");
  }
  return solver.eigenvalues();
}

}  // namespace spectl
