#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "spectl/harness.hpp"
#include "spectl/matrix_market.hpp"
#include "spectl/smoothers.hpp"
#include "spectl/verification.hpp"

namespace spectl {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kCompetitors = 100;
constexpr int kBasisChanges = 10;
constexpr int kRandomDiagonals = 10;
constexpr int kRandomBlocks = 5;
constexpr std::uint64_t kVerifySeedBase = 9000;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '"') c = ' ';
  return s;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

IterationOptions iteration_options(const RunConfig& config, const NormSpec& norm) {
  IterationOptions options = default_iteration_options();
  if (!config.seeds.empty()) options.seeds = config.seeds;
  options.k_cap = config.k_cap;
  options.rtol = config.rtol;
  options.norm = norm;
  return options;
}

NormSpec norm_spec(const RunConfig& config, const GeneralizedEigenDecomposition& ged) {
  if (config.norm_d.empty()) return NormSpec::identity(ged.size(), config.real_mode);
  if (static_cast<Index>(config.norm_d.size()) != ged.size()) {
    throw Error(ErrorKind::ConfigError, "norm.d length differs from n");
  }
  NormSpec spec{CVector(ged.size()), config.real_mode};
  for (Index i = 0; i < ged.size(); ++i) spec.d(i) = Complex(config.norm_d[i], 0.0);
  try {
    spec.validate(ged);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  return spec;
}

struct ChosenTransfers {
  TransferPair pair;
  Index requested;
  Index effective;
  std::vector<std::string> warnings;
};

bool user_transfers(const RunConfig& config) { return !config.transfer_p.empty(); }

TransferPair load_user_transfers(const RunConfig& config, Index n) {
  CMatrix p = load_matrix_market(config.transfer_p);
  CMatrix r = load_matrix_market(config.transfer_r);
  if (p.rows() != n || r.rows() != n) {
    throw Error(ErrorKind::ConfigError, "transfer files must have n rows");
  }
  const Field field = (is_real(p) && is_real(r)) ? Field::Real : Field::Complex;
  return TransferPair(std::move(p), std::move(r), field);
}

ChosenTransfers optimal_transfers(const RunConfig& config, const Setup& setup, Index n_c) {
  if (config.real_mode) {
    if (setup.pencil.field() != Field::Real) {
      throw Error(ErrorKind::ConfigError, "--real needs a real pencil");
    }
    RealTransfers rt = optimal_real_transfers(setup.ged, n_c);
    for (const auto& w : rt.warnings) spdlog::warn("{}", w);
    return {std::move(rt.pair), n_c, rt.effective_n_c, std::move(rt.warnings)};
  }
  return {optimal_complex_transfers(setup.ged, n_c), n_c, n_c, {}};
}

std::vector<ChosenTransfers> transfer_plan(const RunConfig& config, const Setup& setup) {
  std::vector<ChosenTransfers> plan;
  if (user_transfers(config)) {
    TransferPair tp = load_user_transfers(config, setup.pencil.size());
    const Index nc = tp.coarse_size();
    plan.push_back({std::move(tp), nc, nc, {}});
    return plan;
  }
  for (Index nc : resolve_coarse_sizes(config, setup.pencil.size())) {
    plan.push_back(optimal_transfers(config, setup, nc));
  }
  return plan;
}

std::vector<std::string> setup_warnings(const Setup& setup) {
  std::vector<std::string> w;
  if (setup.ged.ill_conditioned) {
    w.push_back("IllConditionedEigenbasis cond_vr=" + fmt(setup.ged.cond_right));
  }
  return w;
}

ordered_json history_json(const SeedHistory& h) {
  ordered_json j;
  j["seed"] = h.seed;
  j["k_max"] = h.k_max;
  j["residual_factor"] = h.residual_factor;
  j["error_factor"] = h.error_norms.empty() ? ordered_json(nullptr) : ordered_json(h.error_factor);
  j["diverged"] = h.diverged;
  j["residual_norms"] = h.residual_norms;
  j["error_norms"] = h.error_norms;
  return j;
}

// Check bookkeeping for the verify verb.
struct CheckList {
  ordered_json items = ordered_json::array();
  bool all_pass = true;

  void add(const std::string& name, std::optional<Index> n_c, double value, double tolerance,
           bool pass) {
    ordered_json c;
    c["name"] = name;
    c["n_c"] = n_c ? ordered_json(*n_c) : ordered_json(nullptr);
    c["value"] = value;
    c["tolerance"] = tolerance;
    c["pass"] = pass;
    items.push_back(std::move(c));
    all_pass = all_pass && pass;
  }
  void at_most(const std::string& name, std::optional<Index> n_c, double value, double tol) {
    add(name, n_c, value, tol, value <= tol);
  }
};

void verify_optimal(const Setup& setup, const NormSpec& norm, const ChosenTransfers& chosen,
                    int nu1, int nu2, CheckList& checks) {
  const Pencil& pencil = setup.pencil;
  const auto& ged = setup.ged;
  const Index nc = chosen.effective;
  const Index n = pencil.size();
  NormalStream stream(kVerifySeedBase + static_cast<std::uint64_t>(nc));

  const TwoLevelOperator tl(pencil, chosen.pair, nu1, nu2);
  const CMatrix e = error_propagator(tl);
  const double bound = predicted_bound(ged, nc, nu1, nu2);
  const double scale = std::max(1.0, bound);

  checks.at_most("tightness_norm", nc, std::abs(n_norm_of(e, norm, ged) - bound), 1e-8 * scale);
  checks.at_most("tightness_spectral_radius", nc, std::abs(spectral_radius(e) - bound),
                 1e-8 * scale);

  double power_gap = 0.0;
  for (int k : {2, 3, 5}) {
    power_gap = std::max(power_gap, std::abs(power_norm_check(e, norm, ged, k) - bound));
  }
  checks.at_most("power_identity", nc, power_gap, 1e-6);

  const CMatrix pi = coarse_projection(pencil, chosen.pair);
  const CMatrix n_matrix = n_norm_matrix(norm, ged);
  checks.at_most("orthogonality_configured_norm", nc, check_pi_orthogonal(pi, n_matrix),
                 1e-9 * max_abs(n_matrix));

  double worst_diag = 0.0;
  for (int t = 0; t < kRandomDiagonals; ++t) {
    const CMatrix nm = n_norm_matrix(random_norm_spec(ged, norm.real_mode, stream), ged);
    worst_diag = std::max(worst_diag, check_pi_orthogonal(pi, nm) / max_abs(nm));
  }
  checks.at_most("orthogonality_random_diagonal", nc, worst_diag, 1e-9);

  double worst_block = 0.0;
  for (int t = 0; t < kRandomBlocks; ++t) {
    const CMatrix nm = n_norm_matrix(random_block_weight(n, nc, stream), ged);
    worst_block = std::max(worst_block, check_pi_orthogonal(pi, nm) / max_abs(nm));
  }
  checks.at_most("orthogonality_block_weight", nc, worst_block, 1e-9);

  double worst_margin = std::numeric_limits<double>::infinity();
  if (nc < n) {
    for (int t = 0; t < kCompetitors; ++t) {
      const TwoLevelOperator rival(pencil, random_competitor(pencil, nc, stream), nu1, nu2);
      worst_margin = std::min(worst_margin, n_norm_of(error_propagator(rival), norm, ged) - bound);
    }
  } else {
    worst_margin = 0.0;
  }
  checks.add("optimality", nc, worst_margin, -1e-10, worst_margin >= -1e-10);

  double worst_basis = 0.0;
  const double pi_scale = std::max(1.0, max_abs(pi));
  for (int t = 0; t < kBasisChanges; ++t) {
    const BasisChange bc = random_basis_change(nc, chosen.pair.field(), stream);
    const CMatrix pi2 = coarse_projection(pencil, apply_basis_change(chosen.pair, bc));
    worst_basis = std::max(worst_basis, max_abs(pi2 - pi) / pi_scale);
  }
  checks.at_most("basis_invariance", nc, worst_basis, 1e-10);

  if (pencil.field() == Field::Real) {
    const RealTransfers real = optimal_real_transfers(ged, nc);
    const TransferPair complex_pair = optimal_complex_transfers(ged, real.effective_n_c);
    const CMatrix er = error_propagator(TwoLevelOperator(pencil, real.pair, nu1, nu2));
    const CMatrix ec = error_propagator(TwoLevelOperator(pencil, complex_pair, nu1, nu2));
    checks.at_most("real_equivalence", nc,
                   multiset_distance(eigenvalues_of(er), eigenvalues_of(ec)), 1e-7 * scale);
  }
}

}  // namespace

Setup prepare(const RunConfig& config) {
  config.validate();
  ProblemInstance problem = build_problem(config.problem);
  const SmootherKind kind =
      config.smoother.value_or(problem.m ? SmootherKind::Given : SmootherKind::Jacobi);

  CMatrix m;
  std::string label;
  switch (kind) {
    case SmootherKind::Given:
      if (!problem.m) throw Error(ErrorKind::ConfigError, "smoother 'given' needs an M matrix");
      m = *problem.m;
      label = "given";
      break;
    case SmootherKind::Jacobi: {
      Smoother s = jacobi(problem.a);
      m = s.m;
      label = s.label;
      break;
    }
    case SmootherKind::BlockJacobi: {
      Smoother s = block_jacobi(problem.a, problem.blocks);
      m = s.m;
      label = s.label;
      break;
    }
    case SmootherKind::RbJacobi: {
      Smoother s = red_black_jacobi(problem.a, rs_cf_split(problem.a, config.theta));
      m = s.m;
      label = s.label;
      break;
    }
    case SmootherKind::BlockRbJacobi: {
      const CFSplit split = rs_cf_split(problem.a, problem.blocks, config.theta);
      Smoother s = red_black_jacobi(problem.a, split, problem.blocks);
      m = s.m;
      label = s.label;
      break;
    }
  }

  Pencil pencil = Pencil::from_complex(problem.a, std::move(m));
  spdlog::info("problem {} n={} smoother {}", problem.name, pencil.size(), label);
  GeneralizedEigenDecomposition ged = factor_pencil(pencil);
  if (ged.ill_conditioned) {
    spdlog::warn("eigenvector matrix is ill-conditioned (cond_vr = {:.3e})", ged.cond_right);
  }
  return Setup{std::move(problem), kind, std::move(label), std::move(pencil), std::move(ged)};
}

int cmd_spectrum(const RunConfig& config, std::ostream& out) {
  const Setup setup = prepare(config);
  const auto& ged = setup.ged;
  if (config.format == "json") {
    ordered_json j;
    j["problem"] = setup.problem.name;
    j["n"] = ged.size();
    j["smoother"] = setup.smoother_label;
    j["cond_vr"] = ged.cond_right;
    j["ill_conditioned"] = ged.ill_conditioned;
    ordered_json rows = ordered_json::array();
    for (Index i = 0; i < ged.size(); ++i) {
      ordered_json r;
      r["index"] = i + 1;
      r["lambda_re"] = ged.lambdas(i).real();
      r["lambda_im"] = ged.lambdas(i).imag();
      r["deviation"] = ged.deviation(i);
      rows.push_back(std::move(r));
    }
    j["eigenvalues"] = std::move(rows);
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "index,lambda_re,lambda_im,deviation,cond_vr\n";
  for (Index i = 0; i < ged.size(); ++i) {
    out << (i + 1) << ',' << fmt(ged.lambdas(i).real()) << ',' << fmt(ged.lambdas(i).imag())
        << ',' << fmt(ged.deviation(i)) << ',' << fmt(ged.cond_right) << '\n';
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  const Setup setup = prepare(config);
  const auto& ged = setup.ged;
  const Pencil& pencil = setup.pencil;
  const NormSpec norm = norm_spec(config, ged);
  CheckList checks;

  const BiorthogonalityReport bio = verify_biorthogonality(ged, pencil);
  const double a_scale = std::max(1.0, max_abs(pencil.a()));
  checks.at_most("pairing_m", std::nullopt, std::max(bio.offdiag_m, bio.diag_error_m), 1e-10);
  checks.at_most("pairing_a", std::nullopt, std::max(bio.offdiag_a, bio.diag_error_a),
                 1e-10 * a_scale);
  double order_violation = 0.0;
  for (Index i = 0; i + 1 < ged.size(); ++i) {
    order_violation = std::max(order_violation, ged.deviation(i + 1) - ged.deviation(i));
  }
  checks.at_most("deviation_order", std::nullopt, order_violation, 0.0);
  if (ged.cond_right <= 1e8) {
    checks.at_most("reconstruction", std::nullopt, reconstruction_residual(ged, pencil), 1e-9);
  }

  if (user_transfers(config)) {
    std::optional<TransferPair> tp;
    try {
      tp = load_user_transfers(config, pencil.size());
      checks.add("transfer_rank", std::nullopt, 1.0, 1.0, true);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RankDeficientTransfer) throw;
      spdlog::warn("{}", e.what());
      checks.add("transfer_rank", std::nullopt, 0.0, 1.0, false);
    }
    if (tp) {
      const Index nc = tp->coarse_size();
      const double bound = predicted_bound(ged, nc, config.nu1, config.nu2);
      const TwoLevelOperator tl(pencil, *tp, config.nu1, config.nu2);
      const double margin = n_norm_of(error_propagator(tl), norm, ged) - bound;
      checks.add("bound_respected", nc, margin, -1e-10, margin >= -1e-10);
    }
  } else {
    for (const auto& chosen : transfer_plan(config, setup)) {
      verify_optimal(setup, norm, chosen, config.nu1, config.nu2, checks);
    }
  }

  ordered_json j;
  j["problem"] = setup.problem.name;
  j["n"] = pencil.size();
  j["smoother"] = setup.smoother_label;
  j["field"] = std::string(to_string(pencil.field()));
  j["cond_vr"] = ged.cond_right;
  j["warnings"] = setup_warnings(setup);
  j["checks"] = std::move(checks.items);
  j["all_pass"] = checks.all_pass;
  out << j.dump(2) << '\n';
  return checks.all_pass ? kExitOk : kExitChecksFailed;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  const Setup setup = prepare(config);
  const NormSpec norm = norm_spec(config, setup.ged);
  const IterationOptions options = iteration_options(config, norm);
  const Index n = setup.pencil.size();
  const auto base_warnings = setup_warnings(setup);

  out << "n_c,n_c/n,predicted_bound,norm_value,spectral_radius,measured_residual_factor,"
         "measured_error_factor,warnings\n";
  const auto row = [&](Index nc, double bound, double norm_value, double rho, double rf,
                       double ef, std::vector<std::string> warnings) {
    out << nc << ',' << fmt(static_cast<double>(nc) / static_cast<double>(n)) << ','
        << fmt(bound) << ',' << fmt(norm_value) << ',' << fmt(rho) << ',' << fmt(rf) << ','
        << fmt(ef) << ',' << csv_safe(join(warnings, "; ")) << '\n';
  };

  const auto plan = transfer_plan(config, setup);
  for (const auto& chosen : plan) {
    std::vector<std::string> warnings = base_warnings;
    warnings.insert(warnings.end(), chosen.warnings.begin(), chosen.warnings.end());
    try {
      const TwoLevelOperator tl(setup.pencil, chosen.pair, config.nu1, config.nu2);
      const ConvergenceRecord rec = run_iterations(tl, setup.ged, options);
      warnings.insert(warnings.end(), rec.warnings.begin(), rec.warnings.end());
      row(chosen.effective, rec.predicted_bound, rec.norm_value, rec.spectral_radius,
          rec.residual_factor, rec.error_factor.value_or(std::nan("")), warnings);
    } catch (const Error& e) {
      spdlog::warn("n_c={}: {}", chosen.effective, e.what());
      warnings.push_back(e.what());
      const double nan = std::nan("");
      double bound = nan;
      try {
        bound = predicted_bound(setup.ged, chosen.effective, config.nu1, config.nu2);
      } catch (const Error&) {
      }
      row(chosen.effective, bound, nan, nan, nan, nan, warnings);
    }
  }
  return kExitOk;
}

int cmd_run(const RunConfig& config, std::ostream& out) {
  const Setup setup = prepare(config);
  const NormSpec norm = norm_spec(config, setup.ged);
  const IterationOptions options = iteration_options(config, norm);

  ordered_json records = ordered_json::array();
  bool any_diverged = false;
  for (const auto& chosen : transfer_plan(config, setup)) {
    const TwoLevelOperator tl(setup.pencil, chosen.pair, config.nu1, config.nu2);
    const ConvergenceRecord rec = run_iterations(tl, setup.ged, options);
    any_diverged = any_diverged || rec.diverged;
    std::vector<std::string> warnings = chosen.warnings;
    warnings.insert(warnings.end(), rec.warnings.begin(), rec.warnings.end());

    ordered_json r;
    r["n_c"] = chosen.requested;
    r["effective_n_c"] = chosen.effective;
    r["predicted_bound"] = rec.predicted_bound;
    r["norm_value"] = rec.norm_value;
    r["spectral_radius"] = rec.spectral_radius;
    r["residual_factor"] = rec.residual_factor;
    r["error_factor"] = rec.error_factor ? ordered_json(*rec.error_factor) : ordered_json(nullptr);
    r["diverged"] = rec.diverged;
    r["warnings"] = warnings;
    ordered_json hist = ordered_json::array();
    for (const auto& h : rec.histories) hist.push_back(history_json(h));
    r["histories"] = std::move(hist);
    records.push_back(std::move(r));
  }
  if (any_diverged) spdlog::warn("at least one start vector diverged");

  ordered_json j;
  j["problem"] = setup.problem.name;
  j["n"] = setup.pencil.size();
  j["smoother"] = setup.smoother_label;
  j["nu1"] = config.nu1;
  j["nu2"] = config.nu2;
  j["k_cap"] = options.k_cap;
  j["rtol"] = options.rtol;
  j["cond_vr"] = setup.ged.cond_right;
  j["warnings"] = setup_warnings(setup);
  j["records"] = std::move(records);
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace spectl
