#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectl/pencil.hpp"
#include "spectl/transfer.hpp"

namespace spectl {

/// Fine-space preconditioner M with its factorization.
struct Smoother {
  CMatrix m;
  LuFactor factor;
  std::string label;

  /// Throws `on_failure` if M is numerically singular.
  Smoother(CMatrix m, std::string label, ErrorKind on_failure = ErrorKind::SingularM);

  CMatrix apply_inverse(const CMatrix& rhs) const { return factor.solve(rhs); }
};

/// Pencil (A, smoother.M); the field is inferred from the entries.
Pencil make_pencil(const CMatrix& a, const Smoother& smoother);

/// x <- x + M^{-1}(b - A x) nu1 times, coarse correction, nu2 more smoothing
/// steps. Immutable after construction.
class TwoLevelOperator {
 public:
  /// Throws SingularCoarseOperator if R^* A P is numerically singular.
  TwoLevelOperator(Pencil pencil, TransferPair transfers, int nu1, int nu2);

  const Pencil& pencil() const noexcept { return pencil_; }
  const TransferPair& transfers() const noexcept { return transfers_; }
  int nu1() const noexcept { return nu1_; }
  int nu2() const noexcept { return nu2_; }
  Index size() const noexcept { return pencil_.size(); }

  /// In-place updates on the columns of x for right-hand sides b.
  void smooth(CMatrix& x, const CMatrix& b) const;
  void coarse_correct(CMatrix& x, const CMatrix& b) const;
  void cycle(CMatrix& x, const CMatrix& b) const;

  /// E_TG applied to the columns of e.
  CMatrix apply_error(const CMatrix& e) const;

 private:
  Pencil pencil_;
  TransferPair transfers_;
  int nu1_;
  int nu2_;
  CMatrix ra_;  // R^* A
  LuFactor coarse_lu_;
};

/// Pi = P (R^* A P)^{-1} R^* A. Throws SingularCoarseOperator or, when the
/// result is not idempotent to 1e-9 relative, ProjectionDefect.
CMatrix coarse_projection(const Pencil& pencil, const TransferPair& tp);

/// Dense E_TG built by applying the operator to the identity.
CMatrix error_propagator(const TwoLevelOperator& tl);

/// sigma_max((D V_r^{-1}) E (D V_r^{-1})^{-1}).
double n_norm_of(const CMatrix& e, const NormSpec& spec, const GeneralizedEigenDecomposition& ged);

double spectral_radius(const CMatrix& e);

/// |1 - lambda_{n_c+1}|^{nu1+nu2} for n_c < n, else 0. lambdas must already
/// be in deviation order.
double predicted_bound(const CVector& lambdas, Index n_c, int nu1, int nu2);
double predicted_bound(const GeneralizedEigenDecomposition& ged, Index n_c, int nu1, int nu2);

/// ||E^k||_N^{1/k}.
double power_norm_check(const CMatrix& e, const NormSpec& spec,
                        const GeneralizedEigenDecomposition& ged, int k);

struct IterationOptions {
  std::vector<std::uint64_t> seeds;
  int k_cap = 20;
  double rtol = 1e-10;
  /// When absent, b = A x_true with x_true drawn from solution_seed.
  std::optional<CVector> rhs;
  std::uint64_t solution_seed = 12345;
  NormSpec norm;  // empty d means D = I
};

/// Ten seeds 1..10 and the remaining defaults above.
IterationOptions default_iteration_options();

struct SeedHistory {
  std::uint64_t seed = 0;
  std::vector<double> residual_norms;
  std::vector<double> error_norms;  // empty when the exact solution is unknown
  int k_max = 0;
  double residual_factor = 0.0;
  double error_factor = 0.0;
  bool diverged = false;
};

struct ConvergenceRecord {
  std::vector<SeedHistory> histories;
  double residual_factor = 0.0;  // worst case over seeds
  std::optional<double> error_factor;
  double predicted_bound = 0.0;
  double norm_value = 0.0;
  double spectral_radius = 0.0;
  bool diverged = false;
  std::vector<std::string> warnings;
};

ConvergenceRecord run_iterations(const TwoLevelOperator& tl,
                                 const GeneralizedEigenDecomposition& ged,
                                 const IterationOptions& options);

}  // namespace spectl
