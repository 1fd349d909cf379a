#include "relpos/systems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "detail/numerics.hpp"

namespace relpos {

SubspaceSystem::SubspaceSystem(Index ambient_dim, std::vector<Subspace> subspaces,
                               std::vector<std::string> labels)
    : ambient_(ambient_dim), subspaces_(std::move(subspaces)), labels_(std::move(labels)) {
  if (ambient_ <= 0) throw InvalidArgument("system ambient dimension must be positive");
  for (std::size_t i = 0; i < subspaces_.size(); ++i) {
    if (subspaces_[i].ambient_dim() != ambient_) {
      throw DimensionMismatch("subspace " + std::to_string(i + 1) + " lives in C^" +
                              std::to_string(subspaces_[i].ambient_dim()) + ", system is C^" +
                              std::to_string(ambient_));
    }
  }
  if (labels_.empty()) {
    for (std::size_t i = 0; i < subspaces_.size(); ++i) labels_.push_back("E" + std::to_string(i + 1));
  } else if (labels_.size() != subspaces_.size()) {
    throw InvalidArgument("label count does not match subspace count");
  }
}

std::vector<Index> SubspaceSystem::dims() const {
  std::vector<Index> out;
  out.reserve(subspaces_.size());
  for (const auto& s : subspaces_) out.push_back(s.dim());
  return out;
}

SubspaceSystem direct_sum(const SubspaceSystem& S, const SubspaceSystem& S2) {
  if (S.size() != S2.size()) throw InvalidArgument("direct_sum: systems have different subspace counts");
  const Index n1 = S.ambient_dim(), n2 = S2.ambient_dim();
  std::vector<Subspace> parts;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const Index d1 = S[i].dim(), d2 = S2[i].dim();
    Matrix b = Matrix::Zero(n1 + n2, d1 + d2);
    b.topLeftCorner(n1, d1) = S[i].basis();
    b.bottomRightCorner(n2, d2) = S2[i].basis();
    parts.push_back(from_orthonormal_unchecked(n1 + n2, std::move(b)));
  }
  return SubspaceSystem(n1 + n2, std::move(parts), S.labels());
}

SubspaceSystem transform(const LinearMap& map, const SubspaceSystem& S, const Tolerance& tol) {
  if (map.rows() != map.cols() || map.cols() != S.ambient_dim()) {
    throw DimensionMismatch("transform: map must be square of the system's ambient dimension");
  }
  std::vector<Subspace> parts;
  for (const auto& e : S.subspaces()) parts.push_back(image(map, e, tol));
  return SubspaceSystem(S.ambient_dim(), std::move(parts), S.labels());
}

// ---------------------------------------------------------------------------
// Hom spaces
//
// The constraint with the most equations is solved in closed form: in unitary
// coordinates V (target, adapted to F_p) and U (source, adapted to E_p) it
// just zeroes one block of V^H X U. The remaining constraints are then imposed
// on the free entries, and their joint null space gives the basis.

HomBasis hom_basis(const SubspaceSystem& S, const SubspaceSystem& T, const Tolerance& tol,
                   Diagnostics* diag) {
  if (S.size() != T.size()) throw InvalidArgument("hom_basis: systems have different subspace counts");
  const Index n = S.ambient_dim(), m = T.ambient_dim();
  const std::size_t count = S.size();

  std::vector<Matrix> src(count), tgt_perp(count);
  std::size_t pivot = 0;
  Index pivot_rows = -1;
  for (std::size_t i = 0; i < count; ++i) {
    src[i] = S[i].basis();
    tgt_perp[i] = detail::complement_columns(T[i].basis());
    const Index rows = tgt_perp[i].cols() * src[i].cols();
    if (rows > pivot_rows) {
      pivot_rows = rows;
      pivot = i;
    }
  }

  Matrix v = Matrix::Identity(m, m), u = Matrix::Identity(n, n);
  Index zero_rows_from = m, zero_cols_to = 0;  // block rows [f, m) x cols [0, d) vanishes
  if (count > 0) {
    const Index f = T[pivot].dim(), d = S[pivot].dim();
    v << T[pivot].basis(), tgt_perp[pivot];
    u << S[pivot].basis(), detail::complement_columns(S[pivot].basis());
    zero_rows_from = f;
    zero_cols_to = d;
  }

  std::vector<std::pair<Index, Index>> free;
  free.reserve(static_cast<std::size_t>(m * n));
  for (Index b = 0; b < n; ++b)
    for (Index a = 0; a < m; ++a)
      if (!(a >= zero_rows_from && b < zero_cols_to)) free.emplace_back(a, b);

  Index rows = 0;
  for (std::size_t i = 0; i < count; ++i)
    if (i != pivot) rows += tgt_perp[i].cols() * src[i].cols();

  const Index nfree = static_cast<Index>(free.size());
  Matrix constraints(rows, nfree);
  Index at = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i == pivot) continue;
    const Index r = tgt_perp[i].cols(), c = src[i].cols();
    if (r * c == 0) continue;
    const Matrix left = tgt_perp[i].adjoint() * v;   // r x m
    const Matrix right = u.adjoint() * src[i];       // n x c
    for (Index k = 0; k < nfree; ++k) {
      const auto [a, b] = free[static_cast<std::size_t>(k)];
      // C_i^H (v_a u_b^H) Q_i = (C_i^H v_a)(u_b^H Q_i), column-major vec.
      for (Index q = 0; q < c; ++q)
        constraints.block(at + q * r, k, r, 1) = left.col(a) * right(b, q);
    }
    at += r * c;
  }

  Matrix coeffs;
  if (rows == 0) {
    coeffs = Matrix::Identity(nfree, nfree);
  } else {
    // Entries are products of orthonormal coordinates, so 1 is the natural
    // scale even when every constraint is already satisfied.
    coeffs = detail::null_space(constraints, tol, 1.0, diag, "hom_basis");
  }

  HomBasis out;
  out.source_dim = n;
  out.target_dim = m;
  out.basis.reserve(static_cast<std::size_t>(coeffs.cols()));
  for (Index j = 0; j < coeffs.cols(); ++j) {
    Matrix y = Matrix::Zero(m, n);
    for (Index k = 0; k < nfree; ++k) {
      const auto [a, b] = free[static_cast<std::size_t>(k)];
      y(a, b) = coeffs(k, j);
    }
    out.basis.push_back(v * y * u.adjoint());
  }
  return out;
}

double hom_residual(const LinearMap& X, const SubspaceSystem& S, const SubspaceSystem& T) {
  if (S.size() != T.size()) throw InvalidArgument("hom_residual: systems have different subspace counts");
  if (X.rows() != T.ambient_dim() || X.cols() != S.ambient_dim()) {
    throw DimensionMismatch("hom_residual: map shape does not match the systems");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (S[i].is_zero()) continue;
    const Matrix xe = X * S[i].basis();
    const Matrix off = xe - T[i].basis() * (T[i].basis().adjoint() * xe);
    if (off.size() > 0) worst = std::max(worst, detail::singular_values(off)(0));
  }
  return worst;
}

bool is_transitive(const SubspaceSystem& S, const Tolerance& tol) {
  return hom_basis(S, S, tol).dim() == 1;
}

bool is_commutative(const SubspaceSystem& S, const Tolerance& tol) {
  std::vector<Matrix> proj;
  for (const auto& e : S.subspaces()) proj.push_back(e.projector());
  for (std::size_t i = 0; i < proj.size(); ++i) {
    for (std::size_t j = i + 1; j < proj.size(); ++j) {
      const Matrix c = proj[i] * proj[j] - proj[j] * proj[i];
      if (detail::singular_values(c)(0) > tol.residual_tol) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Idempotent search

namespace {

// Swaps the adjacent diagonal entries k, k+1 of an upper-triangular Schur
// factor, updating the Schur vectors.
void swap_schur(Matrix& t, Matrix& u, Index k) {
  const Complex t11 = t(k, k), t22 = t(k + 1, k + 1), t12 = t(k, k + 1);
  Complex x0 = t12, x1 = t22 - t11;
  const double nrm = std::sqrt(std::norm(x0) + std::norm(x1));
  if (nrm == 0.0) return;
  x0 /= nrm;
  x1 /= nrm;
  Eigen::Matrix2cd g;
  g << x0, -std::conj(x1), x1, std::conj(x0);
  t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
  t.middleCols(k, 2) = t.middleCols(k, 2) * g;
  u.middleCols(k, 2) = u.middleCols(k, 2) * g;
  t(k + 1, k) = 0.0;
}

// Single-linkage clusters of eigenvalues with the given absolute gap.
std::vector<int> cluster_eigenvalues(const Vector& ev, double gap_abs) {
  const Index n = ev.size();
  std::vector<int> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (label[static_cast<std::size_t>(x)] != x) x = label[static_cast<std::size_t>(x)];
    return x;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) < gap_abs) {
        int a = find(static_cast<int>(i)), b = find(static_cast<int>(j));
        if (a != b) label[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
  for (Index i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = find(static_cast<int>(i));
  return label;
}

// Spectral projection of x onto the eigenvalue cluster containing its first
// Schur eigenvalue. Returns nullopt when x has a single cluster.
std::optional<Matrix> cluster_projection(const Matrix& x, double gap_abs) {
  const Index n = x.rows();
  Eigen::ComplexSchur<Matrix> schur(x);
  Matrix t = schur.matrixT();
  Matrix u = schur.matrixU();
  for (Index i = 1; i < n; ++i)
    for (Index j = 0; j < i; ++j) t(i, j) = 0.0;

  std::vector<int> label = cluster_eigenvalues(t.diagonal(), gap_abs);
  const int chosen = label[0];
  const auto members = std::count(label.begin(), label.end(), chosen);
  if (members == n) return std::nullopt;

  // Bubble members of the chosen cluster to the top-left.
  Index placed = 0;
  for (Index j = 0; j < n; ++j) {
    if (label[static_cast<std::size_t>(j)] != chosen) continue;
    for (Index k = j; k > placed; --k) {
      swap_schur(t, u, k - 1);
      std::swap(label[static_cast<std::size_t>(k - 1)], label[static_cast<std::size_t>(k)]);
    }
    ++placed;
  }
  const Index k = placed;

  // T11 R - R T22 = T12, solved column by column (both blocks triangular).
  const Matrix t11 = t.topLeftCorner(k, k);
  const Matrix t12 = t.topRightCorner(k, n - k);
  const Matrix t22 = t.bottomRightCorner(n - k, n - k);
  Matrix r = Matrix::Zero(k, n - k);
  for (Index j = 0; j < n - k; ++j) {
    Vector rhs = t12.col(j);
    for (Index l = 0; l < j; ++l) rhs += r.col(l) * t22(l, j);
    Matrix shifted = t11;
    shifted.diagonal().array() -= t22(j, j);
    r.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  Matrix p_schur = Matrix::Zero(n, n);
  p_schur.topLeftCorner(k, k).setIdentity();
  p_schur.topRightCorner(k, n - k) = r;
  return Matrix(u * p_schur * u.adjoint());
}

IdempotentWitness make_witness(const Matrix& p) {
  const Index n = p.rows();
  // The trace of an idempotent is its rank.
  const Index k = static_cast<Index>(std::llround(p.trace().real()));
  Matrix range = detail::leading_left_singular(p, k);
  Matrix kernel = detail::leading_left_singular(Matrix::Identity(n, n) - p, n - k);
  return IdempotentWitness{p, from_orthonormal_unchecked(n, std::move(range)),
                           from_orthonormal_unchecked(n, std::move(kernel))};
}

bool witness_ok(const SubspaceSystem& S, const Matrix& p, const Tolerance& tol) {
  const Index n = p.rows();
  if ((p * p - p).norm() > tol.residual_tol) return false;
  if (hom_residual(p, S, S) > tol.residual_tol) return false;
  const double tr = p.trace().real();
  return tr > 0.5 && tr < static_cast<double>(n) - 0.5;
}

}  // namespace

std::optional<IdempotentWitness> find_nontrivial_idempotent(const SubspaceSystem& S,
                                                            const Tolerance& tol,
                                                            IdempotentSearchOptions opts) {
  return find_nontrivial_idempotent(S, hom_basis(S, S, tol), tol, opts);
}

std::optional<IdempotentWitness> find_nontrivial_idempotent(const SubspaceSystem& S,
                                                            const HomBasis& ends,
                                                            const Tolerance& tol,
                                                            IdempotentSearchOptions opts) {
  if (opts.trials < 1) throw InvalidArgument("find_nontrivial_idempotent: trials must be >= 1");
  const Index n = S.ambient_dim();
  if (ends.source_dim != n || ends.target_dim != n) {
    throw DimensionMismatch("find_nontrivial_idempotent: basis does not belong to End(S)");
  }
  if (n == 1 || ends.dim() <= 1) return std::nullopt;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < opts.trials; ++trial) {
    Matrix x = Matrix::Zero(n, n);
    for (const auto& b : ends.basis) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      x += Complex(re, im) * b;
    }
    x /= x.norm();
    auto p = cluster_projection(x, opts.cluster_gap);
    if (!p) continue;
    if (!witness_ok(S, *p, tol)) continue;
    return make_witness(*p);
  }
  return std::nullopt;
}

void check_witness(const SubspaceSystem& S, const IdempotentWitness& W, const Tolerance& tol) {
  const Index n = S.ambient_dim();
  if (W.map.rows() != n || W.map.cols() != n) throw InvalidArgument("witness has the wrong shape");
  if ((W.map * W.map - W.map).norm() > tol.residual_tol) throw InvalidArgument("witness is not idempotent");
  if (hom_residual(W.map, S, S) > tol.residual_tol) throw InvalidArgument("witness is not an endomorphism of the system");
  if (W.range.is_zero() || W.kernel.is_zero()) throw InvalidArgument("witness is trivial (0 or I)");
  if (W.range.dim() + W.kernel.dim() != n) throw InvalidArgument("witness range and kernel do not span H");
}

SplitResult split_by_idempotent(const SubspaceSystem& S, const IdempotentWitness& W,
                                const Tolerance& tol) {
  check_witness(S, W, tol);
  const Index n = S.ambient_dim();
  const Matrix& p = W.map;
  const Matrix q = Matrix::Identity(n, n) - p;
  const Matrix& b1 = W.range.basis();
  const Matrix& b2 = W.kernel.basis();

  std::vector<Subspace> first, second;
  for (std::size_t i = 0; i < S.size(); ++i) {
    // P E_i = E_i ∩ Im P because P maps E_i into itself.
    const Subspace in1 = image(p, S[i], tol);
    const Subspace in2 = image(q, S[i], tol);
    if (in1.dim() + in2.dim() != S[i].dim()) {
      throw ConditioningFailure("split_by_idempotent: " + S.labels()[i] + " does not split (" +
                                std::to_string(in1.dim()) + " + " + std::to_string(in2.dim()) +
                                " != " + std::to_string(S[i].dim()) + ")");
    }
    first.push_back(from_orthonormal_unchecked(
        b1.cols(), detail::leading_left_singular(b1.adjoint() * in1.basis(), in1.dim())));
    second.push_back(from_orthonormal_unchecked(
        b2.cols(), detail::leading_left_singular(b2.adjoint() * in2.basis(), in2.dim())));
  }

  Matrix embed(n, n);
  embed << b1, b2;
  SplitResult out{SubspaceSystem(b1.cols(), std::move(first), S.labels()),
                  SubspaceSystem(b2.cols(), std::move(second), S.labels()), std::move(embed)};
  const auto rep = verify_isomorphism(out.embedding, direct_sum(out.first, out.second), S, tol);
  if (!rep.passes) {
    throw ConditioningFailure("split_by_idempotent: halves do not reassemble (max gap " +
                              std::to_string(rep.max_gap) + ")");
  }
  return out;
}

IsomorphismReport verify_isomorphism(const LinearMap& T, const SubspaceSystem& S,
                                     const SubspaceSystem& S2, const Tolerance& tol) {
  if (S.size() != S2.size()) throw DimensionMismatch("verify_isomorphism: subspace counts differ");
  if (T.rows() != T.cols() || T.cols() != S.ambient_dim() || T.rows() != S2.ambient_dim()) {
    throw DimensionMismatch("verify_isomorphism: map must be square and match both ambient dimensions");
  }
  IsomorphismReport rep;
  const RealVector sv = detail::singular_values(T);
  rep.sigma_max = sv(0);
  rep.sigma_min = sv(sv.size() - 1);
  rep.invertible = rep.sigma_max > 0.0 && rep.sigma_min > tol.rank_rtol * rep.sigma_max;
  rep.condition = rep.sigma_min > 0.0 ? rep.sigma_max / rep.sigma_min : INFINITY;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const double g = gap(image(T, S[i], tol), S2[i]);
    rep.gaps.push_back(g);
    rep.max_gap = std::max(rep.max_gap, g);
  }
  rep.passes = rep.invertible && rep.max_gap <= tol.residual_tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Lattice predicates

bool are_linearly_independent(std::span<const Subspace> subspaces, const Tolerance& tol) {
  for (std::size_t i = 1; i < subspaces.size(); ++i)
    require_same_ambient(subspaces[0], subspaces[i], "are_linearly_independent");
  return independent_sum(subspaces, tol);
}

namespace {

void require_three(const SubspaceSystem& S, const char* op) {
  if (S.size() != 3) {
    throw InvalidArgument(std::string(op) + ": expected 3 subspaces, got " + std::to_string(S.size()));
  }
}

bool proper_nonzero(const Subspace& e) { return !e.is_zero() && !e.is_whole(); }

}  // namespace

bool detect_double_triangle(const SubspaceSystem& S, const Tolerance& tol) {
  require_three(S, "detect_double_triangle");
  for (const auto& e : S.subspaces())
    if (!proper_nonzero(e)) return false;
  const Index n = S.ambient_dim();
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (join(S[i], S[j], tol).dim() != n) return false;
      if (!meet(S[i], S[j], tol).is_zero()) return false;
    }
  }
  return true;
}

bool detect_pentagon(const SubspaceSystem& S, const Tolerance& tol) {
  require_three(S, "detect_pentagon");
  for (const auto& e : S.subspaces())
    if (!proper_nonzero(e)) return false;
  if (join(S[0], S[1], tol).dim() != S.ambient_dim()) return false;
  if (!meet(S[0], S[2], tol).is_zero()) return false;
  return S[2].dim() > S[1].dim() && contains(S[2], S[1], tol);
}

}  // namespace relpos
