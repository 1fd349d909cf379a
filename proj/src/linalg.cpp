#include "relpos/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/numerics.hpp"
#include "detail/svd.hpp"

namespace relpos {

void Tolerance::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(rank_rtol) || !positive(gap_tol) || !positive(residual_tol) ||
      !positive(cond_warn) || !positive(angle_eps)) {
    throw InvalidArgument("tolerance fields must be finite and strictly positive");
  }
  if (rank_rtol >= 1.0) throw InvalidArgument("rank_rtol must be < 1");
  if (angle_eps >= std::numbers::pi / 4) throw InvalidArgument("angle_eps must be < pi/4");
}

RankDecision decide_rank(const RealVector& sv, const Tolerance& tol) {
  return detail::decide_rank_against(sv, tol, sv.size() == 0 ? 0.0 : sv.maxCoeff());
}

namespace detail {

RankDecision decide_rank_against(const RealVector& sv, const Tolerance& tol, double scale) {
  RankDecision r;
  if (sv.size() == 0) return r;
  r.sigma_max = sv.maxCoeff();
  if (r.sigma_max <= 0.0) return r;
  r.cutoff = tol.rank_rtol * std::max(scale, r.sigma_max);
  for (Index i = 0; i < sv.size(); ++i) {
    double s = sv(i);
    if (s > r.cutoff) ++r.rank;
    if (s >= r.cutoff / 10.0 && s <= r.cutoff * 10.0) r.near_cutoff = true;
  }
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// detail

namespace detail {

bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

RealVector singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return RealVector(0);
  return svd(m, SvdVectors::none).values;
}

Matrix leading_left_singular(const Matrix& m, Index k) {
  if (k == 0) return Matrix(m.rows(), 0);
  return svd(m, SvdVectors::thin).u.leftCols(k);
}

Matrix complement_columns(const Matrix& q) {
  const Index n = q.rows(), k = q.cols();
  if (k == 0) return Matrix::Identity(n, n);
  if (k >= n) return Matrix(n, 0);
  Eigen::HouseholderQR<Matrix> qr(q);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  return full.rightCols(n - k);
}

void note_near_cutoff(const RankDecision& r, Diagnostics* diag, const char* what) {
  if (diag == nullptr || !r.near_cutoff) return;
  std::ostringstream os;
  os << what << ": singular value within a factor 10 of the rank cutoff "
     << r.cutoff << " (rank " << r.rank << ")";
  diag->warn(os.str());
}

Matrix null_space(const Matrix& m, const Tolerance& tol, double scale, Diagnostics* diag,
                  const char* what) {
  const Index cols = m.cols();
  if (cols == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(cols, cols);
  const Svd f = svd(m, SvdVectors::full);
  RankDecision r = decide_rank_against(f.values, tol, scale);
  note_near_cutoff(r, diag, what);
  return f.v.rightCols(cols - r.rank);
}

Matrix concat_bases(std::span<const Subspace> parts, Index n) {
  Index total = 0;
  for (const auto& p : parts) {
    if (p.ambient_dim() != n) throw DimensionMismatch("subspaces live in different ambient spaces");
    total += p.dim();
  }
  Matrix out(n, total);
  Index at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.dim()) = p.basis();
    at += p.dim();
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subspace

Subspace from_orthonormal_unchecked(Index ambient_dim, Matrix basis) {
  return Subspace(ambient_dim, std::move(basis), Subspace::Unchecked{});
}

Subspace::Subspace(Index ambient_dim, Matrix basis, Unchecked)
    : ambient_(ambient_dim), basis_(std::move(basis)) {}

Subspace::Subspace(Matrix basis, const Tolerance& tol) : ambient_(basis.rows()) {
  if (ambient_ <= 0) throw InvalidArgument("ambient dimension must be positive");
  if (basis.cols() > ambient_) throw InvalidArgument("more basis vectors than the ambient dimension");
  if (!detail::all_finite(basis)) throw InvalidArgument("basis has non-finite entries");
  if (basis.cols() > 0) {
    const Matrix gram = basis.adjoint() * basis;
    const double defect = (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    if (defect > tol.residual_tol) {
      throw InvalidArgument("basis columns are not orthonormal (defect " + std::to_string(defect) + ")");
    }
  }
  basis_ = std::move(basis);
}

Subspace Subspace::zero(Index n) {
  if (n <= 0) throw InvalidArgument("ambient dimension must be positive");
  return Subspace(n, Matrix(n, 0), Unchecked{});
}

Subspace Subspace::whole(Index n) {
  if (n <= 0) throw InvalidArgument("ambient dimension must be positive");
  return Subspace(n, Matrix::Identity(n, n), Unchecked{});
}

Subspace Subspace::coordinate(Index n, std::span<const Index> coords) {
  if (n <= 0) throw InvalidArgument("ambient dimension must be positive");
  Matrix b = Matrix::Zero(n, static_cast<Index>(coords.size()));
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (coords[j] < 0 || coords[j] >= n) throw InvalidArgument("coordinate index out of range");
    b(coords[j], static_cast<Index>(j)) = 1.0;
  }
  return Subspace(std::move(b));
}

Matrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

void require_same_ambient(const Subspace& A, const Subspace& B, const char* op) {
  if (A.ambient_dim() != B.ambient_dim()) {
    throw DimensionMismatch(std::string(op) + ": ambient dimensions " +
                            std::to_string(A.ambient_dim()) + " and " +
                            std::to_string(B.ambient_dim()) + " differ");
  }
}

// ---------------------------------------------------------------------------
// construction

Subspace span(const Matrix& columns, const Tolerance& tol, Diagnostics* diag) {
  const Index n = columns.rows();
  if (n <= 0) throw InvalidArgument("ambient dimension must be positive");
  if (!detail::all_finite(columns)) throw InvalidArgument("spanning vectors have non-finite entries");
  if (columns.cols() == 0) return Subspace::zero(n);
  const detail::Svd f = detail::svd(columns, detail::SvdVectors::thin);
  RankDecision r = decide_rank(f.values, tol);
  detail::note_near_cutoff(r, diag, "span");
  return from_orthonormal_unchecked(n, f.u.leftCols(r.rank));
}

Subspace orthonormalize(Index n, std::span<const Vector> vectors, const Tolerance& tol,
                        Diagnostics* diag) {
  if (n <= 0) throw InvalidArgument("ambient dimension must be positive");
  Matrix m(n, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != n) {
      throw DimensionMismatch("vector " + std::to_string(j) + " has length " +
                              std::to_string(vectors[j].size()) + ", expected " +
                              std::to_string(n));
    }
    m.col(static_cast<Index>(j)) = vectors[j];
  }
  return span(m, tol, diag);
}

Subspace image(const LinearMap& map, const Subspace& A, const Tolerance& tol, Diagnostics* diag) {
  if (map.cols() != A.ambient_dim()) throw DimensionMismatch("image: map columns do not match ambient dimension");
  if (map.rows() <= 0) throw DimensionMismatch("image: map has no rows");
  const Index n = map.rows();
  if (A.is_zero()) return Subspace::zero(n);
  // Rank is measured against ||map||, so directions the map collapses to
  // rounding noise do not survive.
  const detail::Svd f = detail::svd(map * A.basis(), detail::SvdVectors::thin);
  const RealVector norm = detail::singular_values(map);
  const RankDecision r = detail::decide_rank_against(f.values, tol, norm.size() ? norm(0) : 0.0);
  detail::note_near_cutoff(r, diag, "image");
  return from_orthonormal_unchecked(n, f.u.leftCols(r.rank));
}

// ---------------------------------------------------------------------------
// lattice operations

namespace {

// Factorizes [Qa, -Qb] once. Its left singular vectors above the cutoff span
// A + B; its null vectors (x, y) satisfy Qa x = Qb y and parametrize A ∩ B.
// Both answers come from one rank decision, so the modular law is exact.
struct PairFactorization {
  Matrix joined;  // orthonormal basis of A + B
  Matrix common;  // orthonormal basis of A ∩ B
};

PairFactorization factor_pair(const Subspace& A, const Subspace& B, const Tolerance& tol,
                              Diagnostics* diag, bool want_meet) {
  const Index n = A.ambient_dim(), ka = A.dim(), kb = B.dim();
  PairFactorization out;
  if (ka + kb == 0) {
    out.joined = Matrix(n, 0);
    out.common = Matrix(n, 0);
    return out;
  }
  Matrix m(n, ka + kb);
  m.leftCols(ka) = A.basis();
  m.rightCols(kb) = -B.basis();
  const detail::Svd f = detail::svd(m, want_meet ? detail::SvdVectors::full : detail::SvdVectors::thin);
  RankDecision r = decide_rank(f.values, tol);
  detail::note_near_cutoff(r, diag, want_meet ? "meet" : "join");
  out.joined = f.u.leftCols(r.rank);
  if (!want_meet) return out;
  const Index nullity = ka + kb - r.rank;
  if (nullity == 0 || ka == 0 || kb == 0) {
    out.common = Matrix(n, 0);
    return out;
  }
  const Matrix v = f.v.rightCols(nullity);
  const Matrix pts = A.basis() * v.topRows(ka) + B.basis() * v.bottomRows(kb);
  out.common = detail::leading_left_singular(pts, nullity);
  return out;
}

}  // namespace

Subspace meet(const Subspace& A, const Subspace& B, const Tolerance& tol, Diagnostics* diag) {
  require_same_ambient(A, B, "meet");
  if (A.is_zero() || B.is_zero()) return Subspace::zero(A.ambient_dim());
  auto f = factor_pair(A, B, tol, diag, true);
  return from_orthonormal_unchecked(A.ambient_dim(), std::move(f.common));
}

Subspace join(const Subspace& A, const Subspace& B, const Tolerance& tol, Diagnostics* diag) {
  require_same_ambient(A, B, "join");
  if (A.is_zero()) return B;
  if (B.is_zero()) return A;
  auto f = factor_pair(A, B, tol, diag, false);
  return from_orthonormal_unchecked(A.ambient_dim(), std::move(f.joined));
}

Subspace join(std::span<const Subspace> parts, const Tolerance& tol, Diagnostics* diag) {
  if (parts.empty()) throw InvalidArgument("join of an empty list has no ambient space");
  const Index n = parts.front().ambient_dim();
  return span(detail::concat_bases(parts, n), tol, diag);
}

Subspace complement(const Subspace& A) {
  return from_orthonormal_unchecked(A.ambient_dim(), detail::complement_columns(A.basis()));
}

Subspace relative_complement(const Subspace& outer, const Subspace& inner, const Tolerance& tol,
                             Diagnostics* diag) {
  require_same_ambient(outer, inner, "relative_complement");
  if (inner.is_zero()) return outer;
  if (!contains(outer, inner, tol)) return meet(outer, complement(inner), tol, diag);
  const Index keep = outer.dim() - inner.dim();
  if (keep <= 0) return Subspace::zero(outer.ambient_dim());
  const Matrix rest = outer.basis() - inner.basis() * (inner.basis().adjoint() * outer.basis());
  return from_orthonormal_unchecked(outer.ambient_dim(), detail::leading_left_singular(rest, keep));
}

double gap(const Subspace& A, const Subspace& B) {
  require_same_ambient(A, B, "gap");
  if (A.dim() != B.dim()) return 1.0;
  if (A.dim() == 0) return 0.0;
  // For equal dimensions ||P_A - P_B|| = ||(I - P_B) P_A|| = sin of the
  // largest principal angle.
  const Matrix r = A.basis() - B.basis() * (B.basis().adjoint() * A.basis());
  return std::min(1.0, detail::singular_values(r)(0));
}

bool contains(const Subspace& A, const Subspace& B, const Tolerance& tol) {
  require_same_ambient(A, B, "contains");
  if (B.is_zero()) return true;
  if (B.dim() > A.dim()) return false;
  const Matrix r = B.basis() - A.basis() * (A.basis().adjoint() * B.basis());
  return r.colwise().norm().maxCoeff() <= tol.residual_tol;
}

bool same_subspace(const Subspace& A, const Subspace& B, const Tolerance& tol) {
  require_same_ambient(A, B, "same_subspace");
  return A.dim() == B.dim() && gap(A, B) <= tol.gap_tol;
}

std::vector<double> principal_angles(const Subspace& A_in, const Subspace& B_in) {
  require_same_ambient(A_in, B_in, "principal_angles");
  if (A_in.is_zero() || B_in.is_zero()) throw InvalidArgument("principal_angles: zero subspace");
  const bool swap = A_in.dim() > B_in.dim();
  const Subspace& A = swap ? B_in : A_in;
  const Subspace& B = swap ? A_in : B_in;
  const Index k = A.dim();

  const Matrix cross = B.basis().adjoint() * A.basis();  // kb x ka
  const RealVector cosines = detail::singular_values(cross);
  const RealVector sines = detail::singular_values(A.basis() - B.basis() * cross);

  std::vector<double> angles(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    const double c = std::min(1.0, cosines(i));            // descending cos -> ascending angle
    const double s = std::min(1.0, sines(k - 1 - i));      // ascending sin -> ascending angle
    angles[static_cast<std::size_t>(i)] = (s < c) ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

bool independent_sum(std::span<const Subspace> parts, const Tolerance& tol, Diagnostics* diag) {
  if (parts.empty()) return true;
  const Index n = parts.front().ambient_dim();
  const Matrix all = detail::concat_bases(parts, n);
  if (all.cols() == 0) return true;
  if (all.cols() > n) return false;
  RankDecision r = decide_rank(detail::singular_values(all), tol);
  detail::note_near_cutoff(r, diag, "independence");
  return r.rank == all.cols();
}

}  // namespace relpos
