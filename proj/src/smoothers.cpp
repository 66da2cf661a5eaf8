#include "spectl/smoothers.hpp"

#include <algorithm>
#include <cmath>

namespace spectl {

namespace {

enum class Mark { Unassigned, Coarse, Fine };

// Greedy first pass given strong sets S_i.
std::vector<Color> first_pass(const std::vector<std::vector<Index>>& strong) {
  const auto n = static_cast<Index>(strong.size());
  std::vector<std::vector<Index>> influences(strong.size());  // S_i^T
  for (Index i = 0; i < n; ++i)
    for (Index j : strong[i]) influences[j].push_back(i);

  std::vector<Index> lambda(strong.size());
  for (Index i = 0; i < n; ++i) lambda[i] = static_cast<Index>(influences[i].size());
  std::vector<Mark> mark(strong.size(), Mark::Unassigned);

  for (Index assigned = 0; assigned < n;) {
    Index pick = -1;
    for (Index i = 0; i < n; ++i) {
      if (mark[i] == Mark::Unassigned && (pick < 0 || lambda[i] > lambda[pick])) pick = i;
    }
    mark[pick] = Mark::Coarse;
    ++assigned;
    for (Index j : influences[pick]) {
      if (mark[j] != Mark::Unassigned) continue;
      mark[j] = Mark::Fine;
      ++assigned;
      for (Index k : strong[j])
        if (mark[k] == Mark::Unassigned) ++lambda[k];
    }
    for (Index k : strong[pick])
      if (mark[k] == Mark::Unassigned) --lambda[k];
  }

  std::vector<Color> labels(strong.size());
  for (Index i = 0; i < n; ++i) labels[i] = mark[i] == Mark::Coarse ? Color::Black : Color::Red;
  return labels;
}

void require_square(const CMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "smoother needs a square nonempty matrix");
  }
}

}  // namespace

Index CFSplit::count(Color c) const {
  return static_cast<Index>(std::count(labels.begin(), labels.end(), c));
}

void BlockPartition::validate(Index n) const {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  Index covered = 0;
  for (const auto& block : blocks) {
    if (block.empty()) throw Error(ErrorKind::InvalidPartition, "empty block");
    for (Index i : block) {
      if (i < 0 || i >= n) throw Error(ErrorKind::InvalidPartition, "block index out of range");
      if (seen[i]) throw Error(ErrorKind::InvalidPartition, "blocks overlap");
      seen[i] = true;
      ++covered;
    }
  }
  if (covered != n) throw Error(ErrorKind::InvalidPartition, "blocks do not cover all indices");
}

BlockPartition BlockPartition::uniform(Index n, Index block_size) {
  if (block_size < 1) throw Error(ErrorKind::InvalidPartition, "block size must be >= 1");
  BlockPartition part;
  for (Index start = 0; start < n; start += block_size) {
    std::vector<Index> block;
    for (Index i = start; i < std::min(n, start + block_size); ++i) block.push_back(i);
    part.blocks.push_back(std::move(block));
  }
  return part;
}

std::vector<Index> BlockPartition::block_of(Index n) const {
  validate(n);
  std::vector<Index> owner(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (Index i : blocks[b]) owner[i] = static_cast<Index>(b);
  return owner;
}

Smoother jacobi(const CMatrix& a) {
  require_square(a);
  for (Index i = 0; i < a.rows(); ++i) {
    if (a(i, i) == Complex(0.0, 0.0)) {
      throw Error(ErrorKind::ZeroDiagonal, "zero diagonal entry at row " + std::to_string(i));
    }
  }
  return Smoother(a.diagonal().asDiagonal().toDenseMatrix(), "jacobi", ErrorKind::ZeroDiagonal);
}

Smoother block_jacobi(const CMatrix& a, const BlockPartition& part) {
  require_square(a);
  const Index n = a.rows();
  const auto owner = part.block_of(n);
  CMatrix m = CMatrix::Zero(n, n);
  for (const auto& block : part.blocks) {
    const auto size = static_cast<Index>(block.size());
    CMatrix sub(size, size);
    for (Index p = 0; p < size; ++p)
      for (Index q = 0; q < size; ++q) sub(p, q) = a(block[p], block[q]);
    if (!LuFactor::try_factor(sub)) {
      throw Error(ErrorKind::SingularBlock,
                  "diagonal block starting at index " + std::to_string(block.front()) +
                      " is singular");
    }
    for (Index p = 0; p < size; ++p)
      for (Index q = 0; q < size; ++q) m(block[p], block[q]) = sub(p, q);
  }
  return Smoother(std::move(m), "block_jacobi", ErrorKind::SingularBlock);
}

std::vector<std::vector<Index>> strong_connections(const CMatrix& a, double theta) {
  require_square(a);
  const Index n = a.rows();
  std::vector<std::vector<Index>> strong(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    double max_neg = 0.0;
    double max_abs_off = 0.0;
    bool complex_row = false;
    for (Index k = 0; k < n; ++k) {
      if (k == i) continue;
      max_neg = std::max(max_neg, -a(i, k).real());
      max_abs_off = std::max(max_abs_off, std::abs(a(i, k)));
      complex_row = complex_row || a(i, k).imag() != 0.0;
    }
    const bool classical = !complex_row && max_neg > 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool is_strong = classical
                                 ? (-a(i, j).real() >= theta * max_neg)
                                 : (max_abs_off > 0.0 && std::abs(a(i, j)) >= theta * max_abs_off);
      if (is_strong) strong[i].push_back(j);
    }
  }
  return strong;
}

CFSplit rs_cf_split(const CMatrix& a, double theta) {
  return CFSplit{first_pass(strong_connections(a, theta)), theta};
}

CFSplit rs_cf_split(const CMatrix& a, const BlockPartition& part, double theta) {
  require_square(a);
  const Index n = a.rows();
  part.validate(n);
  const auto nb = static_cast<Index>(part.blocks.size());
  CMatrix quotient = CMatrix::Zero(nb, nb);
  for (Index bi = 0; bi < nb; ++bi) {
    for (Index bj = 0; bj < nb; ++bj) {
      double sq = 0.0;
      for (Index i : part.blocks[bi])
        for (Index j : part.blocks[bj]) sq += std::norm(a(i, j));
      quotient(bi, bj) = bi == bj ? Complex(std::sqrt(sq), 0.0) : Complex(-std::sqrt(sq), 0.0);
    }
  }
  const CFSplit coarse = rs_cf_split(quotient, theta);
  CFSplit split{std::vector<Color>(static_cast<std::size_t>(n)), theta};
  for (Index b = 0; b < nb; ++b)
    for (Index i : part.blocks[b]) split.labels[i] = coarse.labels[b];
  return split;
}

Smoother red_black_jacobi(const CMatrix& a, const CFSplit& split,
                          const std::optional<BlockPartition>& part) {
  require_square(a);
  const Index n = a.rows();
  if (split.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "CF split length differs from matrix size");
  }
  std::vector<Index> owner(static_cast<std::size_t>(n));
  if (part) {
    owner = part->block_of(n);
    for (const auto& block : part->blocks) {
      for (Index i : block) {
        if (split.labels[i] != split.labels[block.front()]) {
          throw Error(ErrorKind::InconsistentBlockColoring,
                      "block starting at index " + std::to_string(block.front()) +
                          " mixes red and black points");
        }
      }
    }
  } else {
    for (Index i = 0; i < n; ++i) owner[i] = i;
  }

  CMatrix m = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const bool diagonal_block = owner[i] == owner[j];
      const bool black_from_red = split.labels[i] == Color::Black && split.labels[j] == Color::Red;
      if (diagonal_block || black_from_red) m(i, j) = a(i, j);
    }
  }
  const ErrorKind failure = part ? ErrorKind::SingularBlock : ErrorKind::ZeroDiagonal;
  return Smoother(std::move(m), part ? "block_rb_jacobi" : "rb_jacobi", failure);
}

}  // namespace spectl
