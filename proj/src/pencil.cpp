#include "spectl/pencil.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace spectl {

namespace {

void check_square_pair(const CMatrix& a, const CMatrix& m) {
  if (a.rows() == 0 || a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "pencil needs square A and M of equal size n >= 1");
  }
}

// Scale so the largest-magnitude entry is real positive.
void normalize_phase(Eigen::Ref<CVector> v) {
  Index arg = 0;
  double best = -1.0;
  for (Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    if (mag > best) {
      best = mag;
      arg = k;
    }
  }
  if (best <= 0.0) return;
  v *= std::conj(v(arg)) / best;
  v(arg) = Complex(v(arg).real(), 0.0);
}

void normalize_unit(Eigen::Ref<CVector> v) {
  const double nrm = v.norm();
  if (nrm > 0.0) v /= nrm;
  normalize_phase(v);
}

bool is_conjugate(Complex candidate, Complex reference) {
  return std::abs(candidate - std::conj(reference)) <= imag_tolerance(reference);
}

// Real pencils: snap near-real eigenvalues to the real axis (their eigenvector
// pair becomes the real basis {Re v, Im v}) and force literal conjugacy on the
// remaining pairs.
void conjugate_cleanup(CVector& lambdas, CMatrix& vectors) {
  const Index n = lambdas.size();
  std::vector<bool> done(static_cast<std::size_t>(n), false);

  for (Index i = 0; i < n; ++i) {
    if (done[i]) continue;
    const Complex li = lambdas(i);
    if (li.imag() == 0.0) {
      CVector v = vectors.col(i).real().cast<Complex>();
      normalize_unit(v);
      vectors.col(i) = v;
      done[i] = true;
      continue;
    }
    if (li.imag() < 0.0) continue;  // visited from its +Im partner

    Index partner = -1;
    double best = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (done[j] || j == i || lambdas(j).imag() >= 0.0) continue;
      const double gap = std::abs(lambdas(j) - std::conj(li));
      if (partner < 0 || gap < best) {
        partner = j;
        best = gap;
      }
    }
    if (partner < 0) {
      throw Error(ErrorKind::EigenSolverFailure,
                  "real pencil produced an eigenvalue without a conjugate partner");
    }

    if (std::abs(li.imag()) <= imag_tolerance(li)) {
      const double re = 0.5 * (li.real() + lambdas(partner).real());
      CVector re_part = vectors.col(i).real().cast<Complex>();
      CVector im_part = vectors.col(i).imag().cast<Complex>();
      normalize_unit(re_part);
      normalize_unit(im_part);
      lambdas(i) = lambdas(partner) = Complex(re, 0.0);
      vectors.col(i) = re_part;
      vectors.col(partner) = im_part;
    } else {
      CVector v = vectors.col(i);
      CVector w = vectors.col(partner);
      normalize_unit(v);
      normalize_unit(w);
      v = 0.5 * (v + w.conjugate());
      normalize_unit(v);
      vectors.col(i) = v;
      vectors.col(partner) = v.conjugate();
      lambdas(partner) = std::conj(li);
    }
    done[i] = done[partner] = true;
  }
}

}  // namespace

Pencil::Pencil(CMatrix a, CMatrix m, Field field)
    : a_((check_square_pair(a, m), std::move(a))),
      m_(std::move(m)),
      field_(field),
      m_lu_(m_, ErrorKind::SingularM) {
  if (field_ == Field::Real && (!is_real(a_) || !is_real(m_))) {
    throw Error(ErrorKind::InvalidArgument, "real pencil with nonzero imaginary entries");
  }
}

Pencil Pencil::from_real(const RMatrix& a, const RMatrix& m) {
  return Pencil(to_complex(a), to_complex(m), Field::Real);
}

Pencil Pencil::from_complex(CMatrix a, CMatrix m) {
  const Field field = (is_real(a) && is_real(m)) ? Field::Real : Field::Complex;
  return Pencil(std::move(a), std::move(m), field);
}

std::vector<Index> deviation_order(std::span<const Complex> lambdas) {
  const auto n = static_cast<Index>(lambdas.size());
  std::vector<Index> order(lambdas.size());
  std::iota(order.begin(), order.end(), Index{0});

  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Complex la = lambdas[a];
    const Complex lb = lambdas[b];
    const double da = deviation(la);
    const double db = deviation(lb);
    if (da != db) return da > db;
    if (la.real() != lb.real()) return la.real() < lb.real();
    return la.imag() > lb.imag();
  });

  // Near-conjugates can have deviations differing in the last bits; pull each
  // partner next to its mate and put the +Im member first.
  for (Index p = 0; p + 1 < n; ++p) {
    const Complex lp = lambdas[order[p]];
    if (std::abs(lp.imag()) <= imag_tolerance(lp)) continue;
    for (Index q = p + 1; q < n; ++q) {
      if (is_conjugate(lambdas[order[q]], lp)) {
        std::rotate(order.begin() + p + 1, order.begin() + q, order.begin() + q + 1);
        if (lp.imag() < 0.0) std::swap(order[p], order[p + 1]);
        ++p;
        break;
      }
    }
  }
  return order;
}

std::vector<Index> deviation_order(const CVector& lambdas) {
  return deviation_order(std::span<const Complex>(lambdas.data(), lambdas.size()));
}

GeneralizedEigenDecomposition factor_pencil(const Pencil& pencil) {
  const Index n = pencil.size();
  const CMatrix w = pencil.m_factor().solve(pencil.a());

  CVector raw_lambdas;
  CMatrix raw_vectors;
  if (pencil.field() == Field::Real) {
    Eigen::EigenSolver<RMatrix> solver(w.real(), true);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::EigenSolverFailure, "real Schur iteration did not converge");
    }
    raw_lambdas = solver.eigenvalues();
    raw_vectors = solver.eigenvectors();
    conjugate_cleanup(raw_lambdas, raw_vectors);
  } else {
    Eigen::ComplexEigenSolver<CMatrix> solver(w, true);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::EigenSolverFailure, "complex Schur iteration did not converge");
    }
    raw_lambdas = solver.eigenvalues();
    raw_vectors = solver.eigenvectors();
    for (Index j = 0; j < n; ++j) normalize_unit(raw_vectors.col(j));
  }

  GeneralizedEigenDecomposition ged;
  ged.field = pencil.field();
  ged.ordering = deviation_order(raw_lambdas);
  ged.lambdas.resize(n);
  ged.right.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    ged.lambdas(i) = raw_lambdas(ged.ordering[i]);
    ged.right.col(i) = raw_vectors.col(ged.ordering[i]);
  }

  auto right_lu = LuFactor::try_factor(ged.right);
  if (!right_lu) {
    throw Error(ErrorKind::NotDiagonalizable,
                "eigenvector matrix is numerically singular; M^{-1}A looks defective");
  }
  ged.right_inverse = right_lu->solve(CMatrix::Identity(n, n));
  ged.cond_right = 1.0 / right_lu->rcond();
  ged.ill_conditioned = !(ged.cond_right <= kIllConditionedThreshold);
  // V_l = M^{-*} V_r^{-*}.
  ged.left = pencil.m_factor().solve_adjoint(ged.right_inverse.adjoint());
  return ged;
}

BiorthogonalityReport verify_biorthogonality(const GeneralizedEigenDecomposition& ged,
                                             const Pencil& pencil) {
  const Index n = pencil.size();
  if (ged.size() != n || ged.right.rows() != n || ged.left.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "decomposition does not match pencil size");
  }
  const CMatrix xa = ged.left.adjoint() * pencil.a() * ged.right;
  const CMatrix xm = ged.left.adjoint() * pencil.m() * ged.right;

  BiorthogonalityReport report;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      report.offdiag_a = std::max(report.offdiag_a, std::abs(xa(i, j)));
      report.offdiag_m = std::max(report.offdiag_m, std::abs(xm(i, j)));
    }
    report.diag_error_a = std::max(report.diag_error_a, std::abs(xa(i, i) - ged.lambdas(i)));
    report.diag_error_m = std::max(report.diag_error_m, std::abs(xm(i, i) - 1.0));
  }
  return report;
}

double reconstruction_residual(const GeneralizedEigenDecomposition& ged, const Pencil& pencil) {
  const CMatrix lhs = pencil.a() * ged.right;
  const CMatrix rhs = pencil.m() * ged.right * ged.lambdas.asDiagonal();
  const double scale = pencil.a().norm();
  return scale > 0.0 ? (lhs - rhs).norm() / scale : (lhs - rhs).norm();
}

}  // namespace spectl
