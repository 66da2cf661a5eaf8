#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spectl/linalg.hpp"
#include "spectl/smoothers.hpp"

namespace spectl {

/// Structured grid on the unit square. nx = ny = 2 * 2^r for advection and
/// 3 * 2^r for the wave problem.
struct GridSpec {
  Index nx = 2;
  Index ny = 2;
  int refinement = 0;

  static GridSpec advection(int r);
  static GridSpec wave(int r);
  static GridSpec rectangle(Index nx, Index ny);
};

enum class ProblemKind { AdvectionReaction, MixedWave, Laplacian, External, RandomPencil };

std::string_view to_string(ProblemKind kind) noexcept;
/// Accepts advection, wave, laplacian, external, random. Throws ConfigError.
ProblemKind parse_problem_kind(std::string_view name);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::AdvectionReaction;
  GridSpec grid;

  // c0 (advection) or c (wave) = alpha0 + alpha1 * chi_I(x) chi_I(y).
  double alpha0 = 0.1;
  double alpha1 = 0.9;
  double interval_lo = 0.25;
  double interval_hi = 0.75;

  /// Advection: weight of central differencing blended into first-order
  /// upwind (0 = pure upwind).
  double central_weight = 0.5;
  bool zero_velocity = false;

  /// Wave only.
  double dt = 1e-2;
  double penalty = 1.0;
  bool constant_speed = false;

  /// Random pencil only.
  Index size = 6;
  std::uint64_t seed = 42;

  /// External only.
  std::string matrix_path;
  std::string preconditioner_path;

  static ProblemSpec advection(int r);
  static ProblemSpec wave(int r, double dt);
  static ProblemSpec laplacian(Index nx, Index ny);
  static ProblemSpec random(Index n, std::uint64_t seed);
  static ProblemSpec external(std::string a_path, std::string m_path = {});
};

struct AdvectionSystem {
  RMatrix a;
  /// Inflow boundary data (u = 1) moved to the right-hand side.
  RVector inflow_lift;
};

/// b . grad u + c0 u on the interior-plus-outflow nodes (i, j = 1..nx, h =
/// 1/nx); inflow nodes at x = 0 and y = 0 are eliminated.
AdvectionSystem advection_reaction_system(const ProblemSpec& spec);
RMatrix advection_reaction_matrix(const ProblemSpec& spec);

/// One midpoint step of u_t + c div p = 0, p_t + grad u = 0 on the
/// (nx+1)^2 grid nodes with interleaved unknowns (u, p_x, p_y).
RMatrix mixed_wave_matrix(const ProblemSpec& spec);

/// Unscaled 5-point Dirichlet Laplacian on an nx x ny interior grid.
RMatrix hpd_laplacian(const ProblemSpec& spec);

/// Dense real pencil (A, M): A = G1 + 2 sqrt(n) I, M = A + G2 with standard
/// normal G1, G2 drawn in that order from `seed`.
std::pair<RMatrix, RMatrix> random_pencil(Index n, std::uint64_t seed);

/// Real pencil (S blockdiag(L) S^{-1}, I) with prescribed eigenvalues. A
/// complex entry must be followed by its conjugate; each pair becomes a 2x2
/// real block. S has standard normal entries plus 2 sqrt(n) I.
std::pair<RMatrix, RMatrix> spectral_pencil(const CVector& lambdas, std::uint64_t seed);

/// Natural element-style blocks for a problem: 2x2 node patches for grids,
/// node triples for the wave problem, singletons otherwise.
BlockPartition problem_blocks(const ProblemSpec& spec, Index n);

struct ProblemInstance {
  CMatrix a;
  /// Set when the problem carries its own M (random pencils, external files).
  std::optional<CMatrix> m;
  BlockPartition blocks;
  std::string name;
};

ProblemInstance build_problem(const ProblemSpec& spec);

}  // namespace spectl
