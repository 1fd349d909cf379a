#pragma once

// Canonical position of a pair of subspaces.
//
//   C^n = (E1 ∩ E2) ⊕ (E1 ∩ E2^⊥) ⊕ (E1^⊥ ∩ E2) ⊕ (E1^⊥ ∩ E2^⊥) ⊕ (K ⊕ K)
//
// On the generic part K ⊕ K, E1 = K ⊕ 0 and E2 is the range of
// [[c^2, cs], [cs, s^2]] with c = cos θ, s = sin θ for the angle operator θ,
// whose spectrum lies strictly inside (0, π/2).

#include <vector>

#include "relpos/linalg.hpp"

namespace relpos {

struct TwoSubspaceDecomposition {
  Subspace part_11;   // E1 ∩ E2
  Subspace part_10;   // E1 ∩ E2^⊥
  Subspace part_01;   // E1^⊥ ∩ E2
  Subspace part_00;   // E1^⊥ ∩ E2^⊥
  Subspace generic_K; // K ⊕ 0, the part of E1 in generic position
  std::vector<double> angles;  // ascending, strictly inside (angle_eps, π/2 - angle_eps)
  /// n x 2m isometry onto the generic part. Columns 0..m-1 span K ⊕ 0
  /// (inside E1), columns m..2m-1 span 0 ⊕ K; column i and m+i carry angle i.
  LinearMap generic_basis;

  Index generic_multiplicity() const { return static_cast<Index>(angles.size()); }
};

TwoSubspaceDecomposition halmos_decompose(const Subspace& E1, const Subspace& E2,
                                          const Tolerance& tol = {});

struct SumOperatorReport {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double condition = 0.0;
  /// det of the 2x2 block of T on each generic angle; equals sin^2 θ_i.
  std::vector<double> per_angle_determinants;
  std::vector<double> angles;
};

/// T = (P1 + P2) restricted to E1 + E2, in an orthonormal basis of E1 + E2.
/// Throws InvalidArgument when both subspaces are zero.
SumOperatorReport restricted_sum_operator(const Subspace& E1, const Subspace& E2,
                                          const Tolerance& tol = {});

/// Factorized T = (P1 + P2)|_{E1+E2}. For x in E1 + E2 it produces the
/// components A1 x = P1 T^{-1} x and A2 x = P2 T^{-1} x, which satisfy
/// A1 x + A2 x = x. When E1 ∩ E2 = 0 these are the unique components of x
/// in E1 and E2.
class SumOperator {
 public:
  SumOperator(const Subspace& E1, const Subspace& E2, const Tolerance& tol = {});

  /// Columns of `vectors` must lie in E1 + E2.
  std::pair<Matrix, Matrix> split(const Matrix& vectors) const;

  const Subspace& range() const { return range_; }
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }

 private:
  Matrix e1_, e2_;
  Subspace range_;
  Matrix eigvecs_;
  RealVector eigvals_;
  double sigma_min_ = 0.0, sigma_max_ = 0.0;
};

}  // namespace relpos
