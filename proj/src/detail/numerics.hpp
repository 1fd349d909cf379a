#pragma once

// Internal helpers shared by the library modules. Not installed.

#include <string>
#include <utility>

#include "relpos/linalg.hpp"

namespace relpos {

/// Builds a Subspace from columns already known to be orthonormal. Skips the
/// O(nk^2) orthonormality check; only for bases produced by factorizations.
Subspace from_orthonormal_unchecked(Index ambient_dim, Matrix basis);

namespace detail {

/// Rank decision with the cutoff at rank_rtol * max(scale, sigma_max).
RankDecision decide_rank_against(const RealVector& singular_values, const Tolerance& tol, double scale);

/// Singular values, descending.
RealVector singular_values(const Matrix& m);

/// The k leading left singular vectors of m (orthonormal, n x k).
Matrix leading_left_singular(const Matrix& m, Index k);

/// Orthonormal basis of the orthogonal complement of the column space of an
/// orthonormal n x k matrix.
Matrix complement_columns(const Matrix& orthonormal);

/// Columns of an orthonormal basis for ker(m), with the rank cutoff taken
/// against max(scale, sigma_max).
Matrix null_space(const Matrix& m, const Tolerance& tol, double scale, Diagnostics* diag,
                  const char* what);

/// Concatenates the bases side by side.
Matrix concat_bases(std::span<const Subspace> parts, Index ambient_dim);

void note_near_cutoff(const RankDecision& r, Diagnostics* diag, const char* what);

bool all_finite(const Matrix& m);

/// Hermitian part of a matrix that should be Hermitian up to rounding.
inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace detail
}  // namespace relpos
