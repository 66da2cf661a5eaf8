#include "spectl/two_level.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "spectl/random.hpp"

namespace spectl {

namespace {

constexpr double kDivergence = 1e100;

CMatrix similarity_transform(const CMatrix& e, const NormSpec& spec,
                             const GeneralizedEigenDecomposition& ged) {
  const Index n = ged.size();
  if (e.rows() != n || e.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "operator size differs from decomposition");
  }
  const CVector d = spec.d.size() == 0 ? CVector::Ones(n) : spec.d;
  if (d.size() != n) throw Error(ErrorKind::DimensionMismatch, "NormSpec length");
  const CMatrix left = d.asDiagonal() * ged.right_inverse;
  const CMatrix right = ged.right * d.cwiseInverse().asDiagonal();
  return left * e * right;
}

CVector draw_vector(NormalStream& stream, Index n, Field field) {
  CVector v(n);
  if (field == Field::Real) {
    for (Index i = 0; i < n; ++i) v(i) = Complex(stream.next(), 0.0);
  } else {
    for (Index i = 0; i < n; ++i) {
      const double re = stream.next();
      v(i) = Complex(re, stream.next());
    }
  }
  return v;
}

CMatrix restricted_operator(const Pencil& pencil, const TransferPair& tp) {
  if (tp.fine_size() != pencil.size()) {
    throw Error(ErrorKind::DimensionMismatch, "transfer rows differ from pencil size");
  }
  return tp.r().adjoint() * pencil.a();
}

double geometric_factor(double last, double first, int k) {
  if (k <= 0 || first == 0.0) return 0.0;
  return std::pow(last / first, 1.0 / k);
}

}  // namespace

Smoother::Smoother(CMatrix matrix, std::string name, ErrorKind on_failure)
    : m(std::move(matrix)), factor(m, on_failure), label(std::move(name)) {}

Pencil make_pencil(const CMatrix& a, const Smoother& smoother) {
  return Pencil::from_complex(a, smoother.m);
}

TwoLevelOperator::TwoLevelOperator(Pencil pencil, TransferPair transfers, int nu1, int nu2)
    : pencil_(std::move(pencil)),
      transfers_(std::move(transfers)),
      nu1_(nu1),
      nu2_(nu2),
      ra_(restricted_operator(pencil_, transfers_)),
      coarse_lu_(ra_ * transfers_.p(), ErrorKind::SingularCoarseOperator, kCoarsePivotFloor) {
  if (nu1_ < 0 || nu2_ < 0) {
    throw Error(ErrorKind::InvalidArgument, "smoothing counts must be nonnegative");
  }
}

void TwoLevelOperator::smooth(CMatrix& x, const CMatrix& b) const {
  x += pencil_.m_factor().solve(b - pencil_.a() * x);
}

void TwoLevelOperator::coarse_correct(CMatrix& x, const CMatrix& b) const {
  const CMatrix r = b - pencil_.a() * x;
  x += transfers_.p() * coarse_lu_.solve(transfers_.r().adjoint() * r);
}

void TwoLevelOperator::cycle(CMatrix& x, const CMatrix& b) const {
  for (int i = 0; i < nu1_; ++i) smooth(x, b);
  coarse_correct(x, b);
  for (int i = 0; i < nu2_; ++i) smooth(x, b);
}

CMatrix TwoLevelOperator::apply_error(const CMatrix& e) const {
  CMatrix out = e;
  for (int i = 0; i < nu1_; ++i) out -= pencil_.m_factor().solve(pencil_.a() * out);
  out -= transfers_.p() * coarse_lu_.solve(ra_ * out);
  for (int i = 0; i < nu2_; ++i) out -= pencil_.m_factor().solve(pencil_.a() * out);
  return out;
}

CMatrix coarse_projection(const Pencil& pencil, const TransferPair& tp) {
  const CMatrix ra = restricted_operator(pencil, tp);
  const LuFactor coarse(ra * tp.p(), ErrorKind::SingularCoarseOperator, kCoarsePivotFloor);
  const CMatrix pi = tp.p() * coarse.solve(ra);
  const double scale = max_abs(pi);
  if (max_abs(pi * pi - pi) > 1e-9 * scale) {
    throw Error(ErrorKind::ProjectionDefect, "coarse projection is not idempotent");
  }
  return pi;
}

CMatrix error_propagator(const TwoLevelOperator& tl) {
  return tl.apply_error(CMatrix::Identity(tl.size(), tl.size()));
}

double n_norm_of(const CMatrix& e, const NormSpec& spec, const GeneralizedEigenDecomposition& ged) {
  return largest_singular_value(similarity_transform(e, spec, ged));
}

double spectral_radius(const CMatrix& e) {
  if (e.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMatrix> solver(e, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::EigenSolverFailure, "spectral radius: Schur iteration failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double predicted_bound(const CVector& lambdas, Index n_c, int nu1, int nu2) {
  const Index n = lambdas.size();
  if (n_c < 1 || n_c > n) {
    throw Error(ErrorKind::BadCoarseDim, "n_c = " + std::to_string(n_c) + " outside [1, " +
                                             std::to_string(n) + "]");
  }
  if (n_c == n) return 0.0;
  return std::pow(deviation(lambdas(n_c)), nu1 + nu2);
}

double predicted_bound(const GeneralizedEigenDecomposition& ged, Index n_c, int nu1, int nu2) {
  return predicted_bound(ged.lambdas, n_c, nu1, nu2);
}

double power_norm_check(const CMatrix& e, const NormSpec& spec,
                        const GeneralizedEigenDecomposition& ged, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "power must be at least 1");
  // Power in the transformed basis: N-norm round-off then stays absolute.
  const CMatrix y = similarity_transform(e, spec, ged);
  CMatrix yk = y;
  for (int i = 1; i < k; ++i) yk = yk * y;
  return std::pow(largest_singular_value(yk), 1.0 / k);
}

IterationOptions default_iteration_options() {
  IterationOptions options;
  for (std::uint64_t s = 1; s <= 10; ++s) options.seeds.push_back(s);
  return options;
}

ConvergenceRecord run_iterations(const TwoLevelOperator& tl,
                                 const GeneralizedEigenDecomposition& ged,
                                 const IterationOptions& options) {
  if (options.k_cap < 1) throw Error(ErrorKind::InvalidArgument, "k_cap must be >= 1");
  if (!(options.rtol > 0.0)) throw Error(ErrorKind::InvalidArgument, "rtol must be > 0");
  const Index n = tl.size();
  const Field field = tl.pencil().field();
  const CMatrix& a = tl.pencil().a();

  std::optional<CVector> x_true;
  CVector b;
  if (options.rhs) {
    if (options.rhs->size() != n) throw Error(ErrorKind::DimensionMismatch, "rhs length");
    b = *options.rhs;
  } else {
    NormalStream stream(options.solution_seed);
    x_true = draw_vector(stream, n, field);
    b = a * *x_true;
  }

  ConvergenceRecord record;
  const NormSpec norm = options.norm.d.size() == 0 ? NormSpec::identity(n) : options.norm;
  const CMatrix e = error_propagator(tl);
  record.predicted_bound = predicted_bound(ged, tl.transfers().coarse_size(), tl.nu1(), tl.nu2());
  record.norm_value = n_norm_of(e, norm, ged);
  record.spectral_radius = spectral_radius(e);
  if (x_true) record.error_factor = 0.0;

  for (const std::uint64_t seed : options.seeds) {
    NormalStream stream(seed);
    CMatrix x = draw_vector(stream, n, field);
    SeedHistory h;
    h.seed = seed;
    const double r0 = (b - a * x).norm();
    h.residual_norms.push_back(r0);
    if (x_true) h.error_norms.push_back((x - *x_true).norm());

    for (int k = 1; k <= options.k_cap; ++k) {
      tl.cycle(x, b);
      const double rk = (b - a * x).norm();
      h.residual_norms.push_back(rk);
      if (x_true) h.error_norms.push_back((x - *x_true).norm());
      h.k_max = k;
      if (!std::isfinite(rk) || rk > kDivergence) {
        h.diverged = true;
        break;
      }
      if (rk <= options.rtol * r0) break;
    }

    h.residual_factor = geometric_factor(h.residual_norms.back(), r0, h.k_max);
    record.residual_factor = std::max(record.residual_factor, h.residual_factor);
    if (x_true) {
      h.error_factor = geometric_factor(h.error_norms.back(), h.error_norms.front(), h.k_max);
      record.error_factor = std::max(*record.error_factor, h.error_factor);
    }
    if (h.diverged) {
      record.diverged = true;
      record.warnings.push_back("DivergenceOverflow: seed " + std::to_string(seed) +
                                " exceeded 1e100 at k=" + std::to_string(h.k_max));
    }
    record.histories.push_back(std::move(h));
  }
  return record;
}

}  // namespace spectl
