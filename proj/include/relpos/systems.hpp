#pragma once

// Systems of subspaces S = (H; E_1, ..., E_k) and their morphisms.
//
// A homomorphism S -> T is a linear map X with X(E_i) ⊆ F_i for every i; an
// isomorphism is an invertible one with X(E_i) = F_i. Angles between the
// subspaces are not preserved by isomorphisms, so e.g. commutativity is not
// an isomorphism invariant while transitivity and decomposability are.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relpos/linalg.hpp"

namespace relpos {

class SubspaceSystem {
 public:
  /// All subspaces must live in C^ambient_dim. Labels, when given, must
  /// match the number of subspaces; otherwise E1, E2, ... are used.
  SubspaceSystem(Index ambient_dim, std::vector<Subspace> subspaces,
                 std::vector<std::string> labels = {});

  Index ambient_dim() const { return ambient_; }
  std::size_t size() const { return subspaces_.size(); }
  const Subspace& operator[](std::size_t i) const { return subspaces_.at(i); }
  const std::vector<Subspace>& subspaces() const { return subspaces_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::vector<Index> dims() const;

 private:
  Index ambient_;
  std::vector<Subspace> subspaces_;
  std::vector<std::string> labels_;
};

/// (H ⊕ H'; E_1 ⊕ E'_1, ..., E_k ⊕ E'_k) with block-diagonal embedding.
SubspaceSystem direct_sum(const SubspaceSystem& S, const SubspaceSystem& S2);

/// The system (map(H); map(E_1), ...) for a square invertible map.
SubspaceSystem transform(const LinearMap& map, const SubspaceSystem& S, const Tolerance& tol = {});

struct HomBasis {
  Index source_dim = 0;
  Index target_dim = 0;
  /// Frobenius-orthonormal basis of Hom(S, T), each target_dim x source_dim.
  std::vector<LinearMap> basis;

  std::size_t dim() const { return basis.size(); }
};

/// Basis of { X : (I - P_{F_i}) X P_{E_i} = 0 for all i }.
HomBasis hom_basis(const SubspaceSystem& S, const SubspaceSystem& T, const Tolerance& tol = {},
                   Diagnostics* diag = nullptr);

/// max_i ||(I - P_{F_i}) X P_{E_i}||, the amount by which X fails to be a
/// homomorphism S -> T.
double hom_residual(const LinearMap& X, const SubspaceSystem& S, const SubspaceSystem& T);

/// End(S) = C·I.
bool is_transitive(const SubspaceSystem& S, const Tolerance& tol = {});

/// All projections P_i commute pairwise within residual_tol.
bool is_commutative(const SubspaceSystem& S, const Tolerance& tol = {});

struct IdempotentWitness {
  LinearMap map;       // P with P^2 = P, P in End(S), P not in {0, I}
  Subspace range;      // Im P
  Subspace kernel;     // Im (I - P)
};

struct IdempotentSearchOptions {
  int trials = 8;
  std::uint64_t seed = 0;
  double cluster_gap = 1e-6;  // absolute, on the Frobenius-normalized element
};

/// Looks for a nontrivial idempotent in End(S) by drawing random elements of
/// End(S) and taking the spectral projection onto one eigenvalue cluster.
/// Returns nullopt after `trials` draws with a single cluster.
std::optional<IdempotentWitness> find_nontrivial_idempotent(const SubspaceSystem& S,
                                                            const Tolerance& tol = {},
                                                            IdempotentSearchOptions opts = {});

/// Same search over a precomputed End(S) basis.
std::optional<IdempotentWitness> find_nontrivial_idempotent(const SubspaceSystem& S,
                                                            const HomBasis& endomorphisms,
                                                            const Tolerance& tol,
                                                            IdempotentSearchOptions opts);

/// Throws InvalidArgument unless W is a nontrivial idempotent endomorphism of S.
void check_witness(const SubspaceSystem& S, const IdempotentWitness& W, const Tolerance& tol = {});

struct SplitResult {
  SubspaceSystem first;    // on Im P, in an orthonormal basis of Im P
  SubspaceSystem second;   // on Im (I - P)
  /// Invertible map H1 ⊕ H2 -> H realizing direct_sum(first, second) ≅ S.
  LinearMap embedding;
};

/// Splits S along the idempotent: E_i ∩ Im P and E_i ∩ Im (I - P), each
/// re-expressed in orthonormal coordinates of its half. Throws
/// InvalidArgument for an invalid witness and ConditioningFailure when the
/// halves do not reassemble to S.
SplitResult split_by_idempotent(const SubspaceSystem& S, const IdempotentWitness& W,
                                const Tolerance& tol = {});

struct IsomorphismReport {
  std::vector<double> gaps;  // gap(T E_i, F_i)
  double max_gap = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double condition = 0.0;
  bool invertible = false;
  bool passes = false;
};

/// Checks that T: H -> H' carries every E_i onto F_i and is invertible.
IsomorphismReport verify_isomorphism(const LinearMap& T, const SubspaceSystem& S,
                                     const SubspaceSystem& S2, const Tolerance& tol = {});

/// dim(H_1 + ... + H_m) = sum of dim H_i.
bool are_linearly_independent(std::span<const Subspace> subspaces, const Tolerance& tol = {});

/// E_i ∨ E_j = H and E_i ∧ E_j = 0 for i ≠ j, and 0 ≠ E_i ≠ H.
bool detect_double_triangle(const SubspaceSystem& S, const Tolerance& tol = {});

/// E1 ∨ E2 = H, E1 ∧ E3 = 0, E2 ⊊ E3, and 0 ≠ E_i ≠ H. Never true in finite
/// dimension: the first two force dim E2 >= dim E3.
bool detect_pentagon(const SubspaceSystem& S, const Tolerance& tol = {});

}  // namespace relpos
