#pragma once

// Splitting off the distributive part of a system with E1 ∩ E2 = 0 and
// E2 ⊊ E3, and truncation diagnostics for pentagon-shaped examples.
//
// In finite dimension a pentagon (E1 ∨ E2 = H, E1 ∧ E3 = 0, E2 ⊊ E3) cannot
// exist. What survives truncation is how close the sums come to failing to
// be closed, measured by the smallest positive principal angle.

#include <optional>
#include <string>

#include "relpos/systems.hpp"

namespace relpos {

enum class PentagonCase {
  escapes_sum,  // E3 ⊄ E1 + E2: a pentagon-shaped part remains
  within_sum,   // E3 ⊆ E1 + E2: the system is distributive
};

/// "case_i" / "case_ii".
std::string to_string(PentagonCase c);

struct PentagonSplit {
  PentagonCase kind;
  /// Span of the E1-components v_k of the vectors u_k; lies in E1 ∩ E3.
  Subspace n2;
  Subspace f3;                 // E3 ∩ (E3 ∩ (E1 + E2))^⊥, zero for within_sum
  Subspace e1_reduced;         // E1 ∩ N2^⊥ (E1' or M1)
  Subspace e3_reduced;         // E2 ⊕ F3 (E3')
  std::optional<Subspace> n1;  // within_sum: E2
  std::optional<Subspace> m1;  // within_sum: E1 ∩ N2^⊥
  /// escapes_sum: (E1', E2', E3') in orthonormal coordinates of E1' ∨ E3'.
  std::optional<SubspaceSystem> pentagon_part;
  /// Columns u_k = v_k + w_k with v_k in E1, w_k in E2; u spans E3 ∩ (E1+E2) ∩ E2^⊥.
  Matrix u, v, w;

  /// Rank certificate for the independence claims of the case.
  bool independent = false;
  /// Largest gap among the subspace identities of the case, plus the
  /// u = v + w and membership residuals.
  double identity_residual = 0.0;
};

/// Requires 3 subspaces (InvalidArgument), E1 ∧ E2 = 0, E2 ⊆ E3 and
/// dim E3 > dim E2 (PreconditionFailure naming the hypothesis).
PentagonSplit pentagon_split(const SubspaceSystem& S3, const Tolerance& tol = {});

/// The 2n-dimensional coordinate truncation of the standard pentagon
/// example built from A = diag(1, 1/2, ..., 1/n). Throws for n < 2.
SubspaceSystem example9_truncated(Index n);

struct ClosednessMargin {
  double min_positive_angle = 0.0;
  Index truncation_dim = 0;
};

/// Smallest principal angle above tol.angle_eps; truncation_dim is the
/// ambient dimension. Throws PreconditionFailure when every angle is zero.
ClosednessMargin closedness_margin(const Subspace& A, const Subspace& B, const Tolerance& tol = {});

/// Margin between K ⊕ 0 and the graph of diag(1, ..., 1/n) in C^2n, with
/// truncation_dim = n.
ClosednessMargin diagonal_graph_margin(Index n, const Tolerance& tol = {});

}  // namespace relpos
