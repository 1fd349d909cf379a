#pragma once

// Named systems and the seeded random generator used as a test oracle.

#include <cstdint>
#include <random>
#include <utility>

#include "relpos/brenner.hpp"

namespace relpos {

/// Multiplicities of the nine atoms, in InvariantVector slot order.
using MultiplicityVector = InvariantVector;

/// The nine indecomposable 3-systems, numbered as in the classical list:
/// 1 = (C; 0,0,0), 2..4 = one subspace C, 5..7 = two, 8 = all three, and
/// 9 = (C^2; C(1,0), C(0,1), C(1,1)). Throws InvalidArgument outside 1..9.
SubspaceSystem atom(int k);

/// Slot of atom k in a MultiplicityVector.
std::size_t atom_slot(int k);

/// (C^3; C ⊕ 0 ⊕ C, 0 ⊕ C ⊕ C, C(1,1,1)).
SubspaceSystem remark_example();

/// (C^2; C(1,0), C(cos θ, sin θ)) for 0 < θ < π/2.
SubspaceSystem angled_lines(double theta);

/// Haar-distributed unitary from a seeded engine.
Matrix random_unitary(Index n, std::mt19937_64& rng);

/// U · D · V with Haar unitaries U, V and D log-uniform in [1, cond_bound],
/// pinned at both ends so the condition number is exactly cond_bound.
Matrix random_invertible(Index n, double cond_bound, std::mt19937_64& rng);

struct ComposedSystem {
  SubspaceSystem system;
  LinearMap scramble;  // system = scramble · normal_form(v)
};

/// normal_form(v) under a seeded random invertible map with condition number
/// cond_bound. Deterministic in (v, seed, cond_bound).
ComposedSystem compose_from_multiplicities(const MultiplicityVector& v, std::uint64_t seed,
                                           double cond_bound);

/// Random nonzero multiplicity vector with total_dim(v) ≤ max_dim.
MultiplicityVector random_multiplicities(Index max_dim, std::mt19937_64& rng);

/// Three subspaces of C^n with dimensions drawn uniformly from 0..n, spanned
/// by complex Gaussian vectors.
SubspaceSystem random_system(Index n, std::mt19937_64& rng);

}  // namespace relpos
