#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spectl/problems.hpp"
#include "spectl/two_level.hpp"

namespace spectl {

enum class SmootherKind { Jacobi, BlockJacobi, RbJacobi, BlockRbJacobi, Given };

std::string_view to_string(SmootherKind kind) noexcept;
/// jacobi, block_jacobi, rb_jacobi, block_rb_jacobi, given. Throws ConfigError.
SmootherKind parse_smoother_kind(std::string_view name);

struct RunConfig {
  ProblemSpec problem = ProblemSpec::advection(1);
  /// Unset: "given" when the problem carries its own M, Jacobi otherwise.
  std::optional<SmootherKind> smoother;
  double theta = 0.25;
  int nu1 = 1;
  int nu2 = 1;
  std::vector<Index> coarse_sizes;
  std::vector<double> coarse_fractions;
  /// Empty means D = I.
  std::vector<double> norm_d;
  std::vector<std::uint64_t> seeds;
  int k_cap = 20;
  double rtol = 1e-10;
  bool real_mode = false;
  std::string out;
  std::string format;  // spectrum: csv (default) or json
  /// User transfers from Matrix Market files; replaces the optimal pair.
  std::string transfer_p;
  std::string transfer_r;

  /// Throws ConfigError.
  void validate() const;
};

/// Reads a JSON config file. Throws IoError or ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

/// Requested coarse sizes: explicit list plus rounded fractions, clamped to
/// [1, n], deduplicated and sorted. Defaults to fractions 0.1 .. 0.9.
std::vector<Index> resolve_coarse_sizes(const RunConfig& config, Index n);

struct Setup {
  ProblemInstance problem;
  SmootherKind smoother_kind;
  std::string smoother_label;
  Pencil pencil;
  GeneralizedEigenDecomposition ged;
};

Setup prepare(const RunConfig& config);

/// Verb implementations; return the process exit code.
int cmd_spectrum(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_run(const RunConfig& config, std::ostream& out);

/// Full command line (without argv[0]). Output goes to `out` unless --out is
/// given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

}  // namespace spectl
