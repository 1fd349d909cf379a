#pragma once

// Tolerance-aware subspace arithmetic over C^n.
//
// A Subspace is stored as an orthonormal basis (n x k, k may be 0). Every
// rank decision goes through the same relative singular-value cutoff
// (rank_rtol * sigma_max), which keeps meet and join consistent with each
// other: dim(A ∧ B) + dim(A ∨ B) = dim A + dim B holds exactly for the
// returned numerical dimensions.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relpos/errors.hpp"

namespace relpos {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Bounded operators between finite-dimensional spaces: projections,
/// changes of basis, homomorphisms of systems.
using LinearMap = Matrix;

struct Tolerance {
  double rank_rtol = 1e-10;     // relative singular-value cutoff
  double gap_tol = 1e-8;        // subspace equality on ||P_A - P_B||
  double residual_tol = 1e-8;   // verification threshold
  double cond_warn = 1e8;       // condition number that triggers a warning
  double angle_eps = 1e-8;      // principal angles this close to 0 or pi/2 are endpoints

  /// Throws InvalidArgument unless every field is positive and rank_rtol < 1.
  void validate() const;
};

/// Caller-owned sink for conditioning warnings. Operations that make rank
/// decisions append to it when a singular value lands within a factor of 10
/// of the cutoff. Passing nullptr discards warnings.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool clean() const { return warnings.empty(); }
};

/// Outcome of thresholding a list of singular values (sorted descending).
struct RankDecision {
  Index rank = 0;
  double sigma_max = 0.0;
  double cutoff = 0.0;
  bool near_cutoff = false;  // some sigma in [cutoff/10, cutoff*10]
};

RankDecision decide_rank(const RealVector& singular_values, const Tolerance& tol);

class Subspace {
 public:
  /// Wraps an n x k matrix whose columns must be orthonormal within
  /// tol.residual_tol. Throws InvalidArgument otherwise, or for n == 0 or
  /// non-finite entries.
  explicit Subspace(Matrix orthonormal_basis, const Tolerance& tol = {});

  static Subspace zero(Index ambient_dim);
  static Subspace whole(Index ambient_dim);
  /// span{e_i : i in coords} with 0-based coordinates.
  static Subspace coordinate(Index ambient_dim, std::span<const Index> coords);

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  bool is_zero() const { return basis_.cols() == 0; }
  bool is_whole() const { return basis_.cols() == ambient_; }

  const Matrix& basis() const { return basis_; }
  /// Orthogonal projection B B^H, materialized on demand.
  Matrix projector() const;

 private:
  struct Unchecked {};
  Subspace(Index ambient_dim, Matrix basis, Unchecked);

  friend Subspace from_orthonormal_unchecked(Index, Matrix);

  Index ambient_;
  Matrix basis_;
};

/// Column space of `columns` (n x m, m may be 0), with dimension equal to the
/// numerical rank under tol.rank_rtol.
Subspace span(const Matrix& columns, const Tolerance& tol = {}, Diagnostics* diag = nullptr);

/// Span of a list of ambient vectors; every vector must have length
/// ambient_dim. An empty list yields the zero subspace.
Subspace orthonormalize(Index ambient_dim, std::span<const Vector> vectors,
                        const Tolerance& tol = {}, Diagnostics* diag = nullptr);

/// map(A) for a linear map whose column count equals A's ambient dimension.
/// The rank cutoff is relative to ||map||, not to the image alone.
Subspace image(const LinearMap& map, const Subspace& A, const Tolerance& tol = {},
               Diagnostics* diag = nullptr);

Subspace meet(const Subspace& A, const Subspace& B, const Tolerance& tol = {},
              Diagnostics* diag = nullptr);
Subspace join(const Subspace& A, const Subspace& B, const Tolerance& tol = {},
              Diagnostics* diag = nullptr);
Subspace join(std::span<const Subspace> parts, const Tolerance& tol = {},
              Diagnostics* diag = nullptr);
Subspace complement(const Subspace& A);

/// outer ∩ inner^⊥, for inner ⊆ outer. This is the orthogonal complement of
/// `inner` taken inside `outer`; when inner is not contained in outer the
/// general meet(outer, complement(inner)) is returned instead.
Subspace relative_complement(const Subspace& outer, const Subspace& inner,
                             const Tolerance& tol = {}, Diagnostics* diag = nullptr);

/// ||P_A - P_B|| in the operator norm. Lies in [0, 1].
double gap(const Subspace& A, const Subspace& B);

/// True iff ||(I - P_A) b|| <= residual_tol for every basis vector b of B.
bool contains(const Subspace& A, const Subspace& B, const Tolerance& tol = {});

/// Equal dimension and gap(A, B) <= gap_tol.
bool same_subspace(const Subspace& A, const Subspace& B, const Tolerance& tol = {});

/// The min(dim A, dim B) principal angles in ascending order. Small angles
/// come from sines and large ones from cosines, so both ends are accurate.
/// Throws InvalidArgument if either subspace is zero.
std::vector<double> principal_angles(const Subspace& A, const Subspace& B);

/// Numerical rank of the concatenated bases equals the sum of dimensions.
bool independent_sum(std::span<const Subspace> parts, const Tolerance& tol = {},
                     Diagnostics* diag = nullptr);

void require_same_ambient(const Subspace& A, const Subspace& B, const char* op);

}  // namespace relpos
