#pragma once

#include "spectl/random.hpp"
#include "spectl/two_level.hpp"

namespace spectl {

/// Random full-rank (P, R) with standard normal entries (complex entries for
/// complex pencils), re-drawn while R^* A P is singular at the coarse pivot floor.
TransferPair random_competitor(const Pencil& pencil, Index n_c, NormalStream& stream);

/// Random invertible basis change, re-drawn until both condition estimates are
/// at most `max_cond`.
BasisChange random_basis_change(Index n_c, Field field, NormalStream& stream,
                                double max_cond = 1e4);

/// Random diagonal D with entries of magnitude in [0.5, 2]. In real mode the
/// entries are positive and repeated across conjugate pairs.
NormSpec random_norm_spec(const GeneralizedEigenDecomposition& ged, bool real_mode,
                          NormalStream& stream);

/// Random HPD weight blockdiag(G_c, G_f) with an n_c x n_c leading block.
CMatrix random_block_weight(Index n, Index n_c, NormalStream& stream);

/// Largest distance after greedily pairing the two multisets (closest pair
/// first). Infinity if the sizes differ.
double multiset_distance(const CVector& a, const CVector& b);

CVector eigenvalues_of(const CMatrix& m);

}  // namespace spectl
