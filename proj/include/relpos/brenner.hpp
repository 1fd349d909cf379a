#pragma once

// Normal form of a system of three subspaces.
//
// Every (H; E1, E2, E3) with dim H < ∞ is isomorphic to a direct sum of the
// eight one-dimensional distributive atoms and copies of the double triangle
// (C^2; C(1,0), C(0,1), C(1,1)). The multiplicities form a complete
// isomorphism invariant. Block order everywhere is
//
//   S, N1, N2, N3, M1, M2, M3, Q, L
//
// with S in all three subspaces, N_i in the two other than E_i, M_i only in
// E_i, L in none, and Q = K ⊕ K carrying the double triangle.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relpos/systems.hpp"

namespace relpos {

/// Multiplicities in block order; the Q slot counts dim K.
using InvariantVector = std::array<int, 9>;

inline constexpr std::array<std::string_view, 9> kBlockNames{"S",  "N1", "N2", "N3", "M1",
                                                             "M2", "M3", "K",  "L"};

/// Ambient dimension of the normal form: each slot counts once except K, twice.
Index total_dim(const InvariantVector& v);

/// Number of indecomposable summands (one per unit of every slot).
int total_mass(const InvariantVector& v);

/// Throws InvalidArgument for negative entries or the zero vector.
void validate_multiplicities(const InvariantVector& v);

/// The block normal form for the given multiplicities, in block order, with
/// Q = K ⊕ K; K ⊕ 0, 0 ⊕ K and the diagonal {(x, x)}.
SubspaceSystem normal_form(const InvariantVector& v);

struct BrennerDecomposition {
  Subspace common;                      // S
  std::array<Subspace, 3> missing_one;  // N_i: in both subspaces other than E_i
  std::array<Subspace, 3> exclusive;    // M_i
  std::array<Subspace, 3> triangle;     // Q_i, a double triangle spanning Q
  Subspace outside;                     // L

  /// Invertible map sending the system onto normal_form(invariants()). Empty
  /// for hand-assembled decompositions.
  LinearMap change_of_basis;
  /// Largest residual reported by verify_brenner.
  double residual = 0.0;
  /// Smallest eigenvalue of (P1 + P2) on E1 + E2, used to split Q3.
  std::optional<double> sum_operator_sigma_min;
  /// False when some rank decision landed near the cutoff.
  bool trusted = true;
  std::vector<std::string> warnings;

  InvariantVector invariants() const;
  /// Q = Q1 + Q2.
  Subspace double_triangle_part(const Tolerance& tol = {}) const;
};

/// Decomposes a 3-system. Throws InvalidArgument for other arities and
/// ConditioningFailure when the exact-arithmetic dimension identities fail.
BrennerDecomposition brenner_decompose(const SubspaceSystem& S3, const Tolerance& tol = {});

InvariantVector brenner_invariants(const SubspaceSystem& S3, const Tolerance& tol = {});

struct BrennerReport {
  std::array<double, 3> subspace_gaps{};  // gap(E_i, sum of its blocks)
  std::array<double, 3> triangle_gaps{};  // gap(Q, Q_i + Q_j)
  bool triangle_meets_zero = false;
  bool triangle_dims_equal = false;
  bool independent = false;               // the nine blocks are independent
  Index block_dim_total = 0;              // Σ dims, Q counted as dim Q
  Index spanning_deficit = 0;             // ambient_dim - dim(sum of blocks)
  std::optional<double> normal_form_gap;  // when change_of_basis is present
  double residual = 0.0;
  bool passes = false;
};

/// Checks a decomposition against the system; never throws on a bad D.
BrennerReport verify_brenner(const SubspaceSystem& S3, const BrennerDecomposition& D,
                             const Tolerance& tol = {});

struct DoubleTriangleForm {
  Index k_dim = 0;
  /// Sends (Q; Q1, Q2, Q3) onto (K ⊕ K; K ⊕ 0, 0 ⊕ K, diagonal).
  LinearMap map;
  double residual = 0.0;
};

/// Throws PreconditionFailure unless the input is a double triangle.
DoubleTriangleForm normalize_double_triangle(const SubspaceSystem& Q3sys, const Tolerance& tol = {});

struct IsomorphismDecision {
  bool isomorphic = false;
  InvariantVector first{};
  InvariantVector second{};
  /// H -> H' with T(E_i) = F_i, present when isomorphic.
  std::optional<LinearMap> map;
  std::optional<IsomorphismReport> report;
};

/// Equal invariants decide; the map is composed from both change-of-basis
/// maps and checked with verify_isomorphism.
IsomorphismDecision is_isomorphic_three(const SubspaceSystem& A, const SubspaceSystem& B,
                                        const Tolerance& tol = {});

}  // namespace relpos
