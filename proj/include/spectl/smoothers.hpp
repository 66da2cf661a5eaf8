#pragma once

#include <optional>
#include <vector>

#include "spectl/two_level.hpp"

namespace spectl {

/// Red = F-point, Black = C-point.
enum class Color { Red, Black };

struct CFSplit {
  std::vector<Color> labels;
  double theta = 0.25;

  Index size() const noexcept { return static_cast<Index>(labels.size()); }
  Index count(Color c) const;
};

/// Disjoint nonempty index sets covering 0..n-1.
struct BlockPartition {
  std::vector<std::vector<Index>> blocks;

  /// Throws InvalidPartition.
  void validate(Index n) const;

  /// Consecutive blocks of `block_size` (the last may be shorter).
  static BlockPartition uniform(Index n, Index block_size);

  /// block_of[i] is the block containing index i.
  std::vector<Index> block_of(Index n) const;
};

/// M = diag(A). Throws ZeroDiagonal.
Smoother jacobi(const CMatrix& a);

/// M = block diagonal of A on `part`. Throws SingularBlock.
Smoother block_jacobi(const CMatrix& a, const BlockPartition& part);

/// First-pass classical Ruge-Stueben coloring. Strength is the negative
/// coupling measure -a_ij >= theta * max_k(-a_ik); rows with no negative
/// off-diagonal (or any complex entry) use |a_ij| >= theta * max_k |a_ik|.
CFSplit rs_cf_split(const CMatrix& a, double theta = 0.25);

/// Same pass on the block quotient graph with couplings -||A_IJ||_F; the
/// coloring is then expanded so it is constant on every block.
CFSplit rs_cf_split(const CMatrix& a, const BlockPartition& part, double theta = 0.25);

/// M keeps the (block-)diagonal of A and the couplings A(black, red); in
/// red-then-black ordering it is block lower triangular. Throws
/// InconsistentBlockColoring if a block mixes colors.
Smoother red_black_jacobi(const CMatrix& a, const CFSplit& split,
                          const std::optional<BlockPartition>& part = std::nullopt);

/// Strong-connection sets S_i (0-based column indices) for the point pass.
std::vector<std::vector<Index>> strong_connections(const CMatrix& a, double theta);

}  // namespace spectl
