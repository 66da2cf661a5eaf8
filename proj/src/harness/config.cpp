#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spectl/harness.hpp"

namespace spectl {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::ConfigError, what);
}

template <typename T>
void read_if(const json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("key '") + key + "': " + e.what());
  }
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) config_error("unknown key '" + item.key() + "' in " + where);
  }
}

void apply_problem(const json& p, RunConfig& config) {
  if (!p.is_object()) config_error("'problem' must be an object");
  check_keys(p,
             {"kind", "refine", "nx", "ny", "dt", "alpha0", "alpha1", "interval", "central_weight",
              "zero_velocity", "penalty", "constant_speed", "n", "seed", "mtx_a", "mtx_m"},
             "problem");
  std::string kind = "advection";
  read_if(p, "kind", kind);
  int refine = 1;
  read_if(p, "refine", refine);
  if (refine < 0 || refine > 8) config_error("problem.refine must be in [0, 8]");

  ProblemSpec& s = config.problem;
  switch (parse_problem_kind(kind)) {
    case ProblemKind::AdvectionReaction: s = ProblemSpec::advection(refine); break;
    case ProblemKind::MixedWave: s = ProblemSpec::wave(refine, 1e-2); break;
    case ProblemKind::Laplacian: s = ProblemSpec::laplacian(8, 8); break;
    case ProblemKind::RandomPencil: s = ProblemSpec::random(6, 42); break;
    case ProblemKind::External: s = ProblemSpec::external(""); break;
  }
  read_if(p, "nx", s.grid.nx);
  s.grid.ny = s.grid.nx;
  read_if(p, "ny", s.grid.ny);
  read_if(p, "dt", s.dt);
  read_if(p, "alpha0", s.alpha0);
  read_if(p, "alpha1", s.alpha1);
  if (p.contains("interval")) {
    std::vector<double> iv;
    read_if(p, "interval", iv);
    if (iv.size() != 2) config_error("problem.interval needs two numbers");
    s.interval_lo = iv[0];
    s.interval_hi = iv[1];
  }
  read_if(p, "central_weight", s.central_weight);
  read_if(p, "zero_velocity", s.zero_velocity);
  read_if(p, "penalty", s.penalty);
  read_if(p, "constant_speed", s.constant_speed);
  read_if(p, "n", s.size);
  read_if(p, "seed", s.seed);
  read_if(p, "mtx_a", s.matrix_path);
  read_if(p, "mtx_m", s.preconditioner_path);
}

}  // namespace

std::string_view to_string(SmootherKind kind) noexcept {
  switch (kind) {
    case SmootherKind::Jacobi: return "jacobi";
    case SmootherKind::BlockJacobi: return "block_jacobi";
    case SmootherKind::RbJacobi: return "rb_jacobi";
    case SmootherKind::BlockRbJacobi: return "block_rb_jacobi";
    case SmootherKind::Given: return "given";
  }
  return "unknown";
}

SmootherKind parse_smoother_kind(std::string_view name) {
  for (auto kind : {SmootherKind::Jacobi, SmootherKind::BlockJacobi, SmootherKind::RbJacobi,
                    SmootherKind::BlockRbJacobi, SmootherKind::Given}) {
    if (name == to_string(kind)) return kind;
  }
  config_error("unknown smoother '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (nu1 < 0 || nu2 < 0) config_error("nu1 and nu2 must be nonnegative");
  if (k_cap < 1) config_error("k_cap must be >= 1");
  if (!(rtol > 0.0)) config_error("rtol must be > 0");
  if (!(theta > 0.0 && theta <= 1.0)) config_error("theta must lie in (0, 1]");
  for (Index nc : coarse_sizes)
    if (nc < 1) config_error("n_c values must be >= 1");
  for (double f : coarse_fractions)
    if (!(f > 0.0 && f <= 1.0)) config_error("n_c fractions must lie in (0, 1]");
  for (double d : norm_d)
    if (!(d > 0.0)) config_error("norm.d entries must be positive");
  if (!format.empty() && format != "csv" && format != "json") {
    config_error("format must be csv or json");
  }
  if (transfer_p.empty() != transfer_r.empty()) {
    config_error("transfers need both p and r");
  }
  switch (problem.kind) {
    case ProblemKind::AdvectionReaction:
    case ProblemKind::MixedWave:
    case ProblemKind::Laplacian:
      if (problem.grid.nx < 1 || problem.grid.ny < 1) config_error("grid needs nx, ny >= 1");
      if (problem.grid.nx * problem.grid.ny > 4096) config_error("grid too large for dense work");
      break;
    case ProblemKind::RandomPencil:
      if (problem.size < 1 || problem.size > 4096) config_error("random pencil n out of range");
      break;
    case ProblemKind::External:
      if (problem.matrix_path.empty()) config_error("external problem needs --mtx-a");
      break;
  }
  if (problem.kind == ProblemKind::MixedWave && !(problem.dt >= 0.0)) {
    config_error("dt must be nonnegative");
  }
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) config_error("config root must be an object");
  check_keys(root,
             {"problem", "smoother", "theta", "nu1", "nu2", "nc", "nc_frac", "norm", "seeds",
              "k_cap", "rtol", "real", "out", "format", "transfers"},
             "config");

  RunConfig config;
  if (root.contains("problem")) apply_problem(root.at("problem"), config);
  if (root.contains("smoother")) {
    std::string name;
    read_if(root, "smoother", name);
    config.smoother = parse_smoother_kind(name);
  }
  read_if(root, "theta", config.theta);
  read_if(root, "nu1", config.nu1);
  read_if(root, "nu2", config.nu2);
  read_if(root, "nc", config.coarse_sizes);
  read_if(root, "nc_frac", config.coarse_fractions);
  if (root.contains("norm")) {
    const json& norm = root.at("norm");
    if (norm.is_string()) {
      if (norm.get<std::string>() != "identity") config_error("norm must be 'identity' or {d}");
    } else if (norm.is_object()) {
      check_keys(norm, {"d"}, "norm");
      read_if(norm, "d", config.norm_d);
    } else {
      config_error("norm must be 'identity' or {d}");
    }
  }
  read_if(root, "seeds", config.seeds);
  read_if(root, "k_cap", config.k_cap);
  read_if(root, "rtol", config.rtol);
  read_if(root, "real", config.real_mode);
  read_if(root, "out", config.out);
  read_if(root, "format", config.format);
  if (root.contains("transfers")) {
    const json& t = root.at("transfers");
    if (!t.is_object()) config_error("'transfers' must be an object");
    check_keys(t, {"p", "r"}, "transfers");
    read_if(t, "p", config.transfer_p);
    read_if(t, "r", config.transfer_r);
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::vector<Index> resolve_coarse_sizes(const RunConfig& config, Index n) {
  std::vector<double> fractions = config.coarse_fractions;
  if (config.coarse_sizes.empty() && fractions.empty()) {
    for (int k = 1; k <= 9; ++k) fractions.push_back(0.1 * k);
  }
  std::set<Index> sizes;
  for (Index nc : config.coarse_sizes) {
    if (nc < 1 || nc > n) {
      config_error("n_c = " + std::to_string(nc) + " outside [1, " + std::to_string(n) + "]");
    }
    sizes.insert(nc);
  }
  for (double f : fractions) {
    const auto nc = static_cast<Index>(std::llround(f * static_cast<double>(n)));
    sizes.insert(std::clamp<Index>(nc, 1, n));
  }
  return {sizes.begin(), sizes.end()};
}

}  // namespace spectl
