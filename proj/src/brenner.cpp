#include "relpos/brenner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail/numerics.hpp"
#include "relpos/two_subspaces.hpp"

namespace relpos {

Index total_dim(const InvariantVector& v) {
  Index n = 0;
  for (std::size_t i = 0; i < v.size(); ++i) n += (i == 7 ? 2 : 1) * v[i];
  return n;
}

int total_mass(const InvariantVector& v) { return std::accumulate(v.begin(), v.end(), 0); }

void validate_multiplicities(const InvariantVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0) {
      throw InvalidArgument("multiplicity of " + std::string(kBlockNames[i]) + " is negative");
    }
  }
  if (total_mass(v) == 0) throw InvalidArgument("multiplicity vector is zero");
}

SubspaceSystem normal_form(const InvariantVector& v) {
  validate_multiplicities(v);
  const Index n = total_dim(v);
  // Which of E1, E2, E3 contain each distributive slot.
  static constexpr std::array<std::array<bool, 3>, 9> member{{
      {true, true, true},     // S
      {false, true, true},    // N1
      {true, false, true},    // N2
      {true, true, false},    // N3
      {true, false, false},   // M1
      {false, true, false},   // M2
      {false, false, true},   // M3
      {false, false, false},  // K, handled separately
      {false, false, false},  // L
  }};
  std::array<std::vector<Vector>, 3> cols;
  Index at = 0;
  for (std::size_t slot = 0; slot < 9; ++slot) {
    if (slot == 7) {
      const Index k = v[7];
      for (Index j = 0; j < k; ++j) {
        Vector first = Vector::Zero(n), second = Vector::Zero(n), diag = Vector::Zero(n);
        first(at + j) = 1.0;
        second(at + k + j) = 1.0;
        diag(at + j) = diag(at + k + j) = 1.0 / std::sqrt(2.0);
        cols[0].push_back(first);
        cols[1].push_back(second);
        cols[2].push_back(diag);
      }
      at += 2 * k;
      continue;
    }
    for (int j = 0; j < v[slot]; ++j, ++at) {
      Vector e = Vector::Zero(n);
      e(at) = 1.0;
      for (std::size_t i = 0; i < 3; ++i)
        if (member[slot][i]) cols[i].push_back(e);
    }
  }
  std::vector<Subspace> parts;
  for (auto& c : cols) {
    Matrix b(n, static_cast<Index>(c.size()));
    for (std::size_t j = 0; j < c.size(); ++j) b.col(static_cast<Index>(j)) = c[j];
    parts.push_back(from_orthonormal_unchecked(n, std::move(b)));
  }
  return SubspaceSystem(n, std::move(parts));
}

InvariantVector BrennerDecomposition::invariants() const {
  return {static_cast<int>(common.dim()),
          static_cast<int>(missing_one[0].dim()),
          static_cast<int>(missing_one[1].dim()),
          static_cast<int>(missing_one[2].dim()),
          static_cast<int>(exclusive[0].dim()),
          static_cast<int>(exclusive[1].dim()),
          static_cast<int>(exclusive[2].dim()),
          static_cast<int>(triangle[2].dim()),
          static_cast<int>(outside.dim())};
}

Subspace BrennerDecomposition::double_triangle_part(const Tolerance& tol) const {
  return join(triangle[0], triangle[1], tol);
}

namespace {

void require_three(const SubspaceSystem& S, const char* op) {
  if (S.size() != 3) {
    throw InvalidArgument(std::string(op) + ": expected 3 subspaces, got " + std::to_string(S.size()));
  }
}

Subspace join_all(std::initializer_list<Subspace> parts, const Tolerance& tol, Diagnostics* diag) {
  const std::vector<Subspace> v(parts);
  return join(std::span<const Subspace>(v), tol, diag);
}

}  // namespace

BrennerDecomposition brenner_decompose(const SubspaceSystem& S3, const Tolerance& tol) {
  require_three(S3, "brenner_decompose");
  tol.validate();
  Diagnostics diag;
  const Index n = S3.ambient_dim();
  const Subspace& e1 = S3[0];
  const Subspace& e2 = S3[1];
  const Subspace& e3 = S3[2];

  const Subspace e12 = meet(e1, e2, tol, &diag);
  const Subspace e13 = meet(e1, e3, tol, &diag);
  const Subspace e23 = meet(e2, e3, tol, &diag);
  const Subspace common = meet(e12, e3, tol, &diag);

  std::array<Subspace, 3> missing{relative_complement(e23, common, tol, &diag),
                                  relative_complement(e13, common, tol, &diag),
                                  relative_complement(e12, common, tol, &diag)};

  // E_i ∩ (sum of the other two).
  const std::array<Subspace, 3> shared{meet(e1, join(e2, e3, tol, &diag), tol, &diag),
                                       meet(e2, join(e3, e1, tol, &diag), tol, &diag),
                                       meet(e3, join(e1, e2, tol, &diag), tol, &diag)};
  std::array<Subspace, 3> exclusive{relative_complement(e1, shared[0], tol, &diag),
                                    relative_complement(e2, shared[1], tol, &diag),
                                    relative_complement(e3, shared[2], tol, &diag)};

  const Subspace q3 = relative_complement(shared[2], join(e13, e23, tol, &diag), tol, &diag);
  const Index k = q3.dim();

  Matrix first_part(n, 0), second_part(n, 0);
  std::optional<double> sigma_min;
  Subspace q1 = Subspace::zero(n), q2 = Subspace::zero(n);
  if (k > 0) {
    const SumOperator op(e1, e2, tol);
    sigma_min = op.sigma_min();
    std::tie(first_part, second_part) = op.split(q3.basis());
    q1 = span(first_part, tol, &diag);
    q2 = span(second_part, tol, &diag);
    if (q1.dim() != k || q2.dim() != k) {
      throw ConditioningFailure("brenner_decompose: splitting Q3 through E1 + E2 lost rank (" +
                                std::to_string(q1.dim()) + ", " + std::to_string(q2.dim()) +
                                " vs " + std::to_string(k) + ")");
    }
  }

  // E_i ∩ (E_j + E_k) = (E_i ∩ E_j + E_i ∩ E_k) ⊕ Q_i for i = 1, 2.
  if (shared[0].dim() != join(e12, e13, tol, &diag).dim() + k ||
      shared[1].dim() != join(e12, e23, tol, &diag).dim() + k) {
    throw ConditioningFailure("brenner_decompose: E_i ∩ (E_j + E_k) does not split off Q_i");
  }

  const Subspace outside = complement(join_all({e1, e2, e3}, tol, &diag));

  BrennerDecomposition d{common,
                         std::move(missing),
                         std::move(exclusive),
                         {q1, q2, q3},
                         outside,
                         Matrix(),
                         0.0,
                         sigma_min,
                         true,
                         {}};
  const InvariantVector inv = d.invariants();
  if (total_dim(inv) != n) {
    throw ConditioningFailure("brenner_decompose: block dimensions sum to " +
                              std::to_string(total_dim(inv)) + ", ambient is " + std::to_string(n));
  }

  // Columns of the normal-form basis; A1 z_j + A2 z_j = z_j puts Q3 on the diagonal.
  Matrix basis(n, n);
  basis << d.common.basis(), d.missing_one[0].basis(), d.missing_one[1].basis(),
      d.missing_one[2].basis(), d.exclusive[0].basis(), d.exclusive[1].basis(),
      d.exclusive[2].basis(), first_part, second_part, d.outside.basis();
  const RealVector sv = detail::singular_values(basis);
  const double cond = sv(0) / sv(n - 1);
  if (!(sv(n - 1) > tol.rank_rtol * sv(0))) {
    throw ConditioningFailure("brenner_decompose: blocks are not independent (basis condition " +
                              std::to_string(cond) + ")");
  }
  if (cond > tol.cond_warn) diag.warn("brenner_decompose: normal-form basis condition " + std::to_string(cond));
  d.change_of_basis = basis.fullPivLu().inverse();

  d.residual = verify_brenner(S3, d, tol).residual;
  d.warnings = std::move(diag.warnings);
  d.trusted = d.warnings.empty();
  return d;
}

InvariantVector brenner_invariants(const SubspaceSystem& S3, const Tolerance& tol) {
  return brenner_decompose(S3, tol).invariants();
}

BrennerReport verify_brenner(const SubspaceSystem& S3, const BrennerDecomposition& D,
                             const Tolerance& tol) {
  require_three(S3, "verify_brenner");
  BrennerReport rep;
  const Index n = S3.ambient_dim();
  const std::array<const Subspace*, 11> all{&D.common,       &D.missing_one[0], &D.missing_one[1],
                                            &D.missing_one[2], &D.exclusive[0],  &D.exclusive[1],
                                            &D.exclusive[2],   &D.triangle[0],   &D.triangle[1],
                                            &D.triangle[2],    &D.outside};
  for (const Subspace* s : all) {
    if (s->ambient_dim() != n) {
      rep.residual = 1.0;
      rep.subspace_gaps.fill(1.0);
      rep.triangle_gaps.fill(1.0);
      return rep;
    }
  }

  const auto& nn = D.missing_one;
  const auto& m = D.exclusive;
  const auto& q = D.triangle;
  const std::array<Subspace, 3> assembled{
      join_all({D.common, nn[1], nn[2], m[0], q[0]}, tol, nullptr),
      join_all({D.common, nn[0], nn[2], m[1], q[1]}, tol, nullptr),
      join_all({D.common, nn[0], nn[1], m[2], q[2]}, tol, nullptr)};
  for (std::size_t i = 0; i < 3; ++i) rep.subspace_gaps[i] = gap(S3[i], assembled[i]);

  const Subspace whole_q = join(q[0], q[1], tol);
  rep.triangle_meets_zero = true;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3;
    rep.triangle_gaps[i] = gap(whole_q, join(q[i], q[j], tol));
    if (!meet(q[i], q[j], tol).is_zero()) rep.triangle_meets_zero = false;
  }
  rep.triangle_dims_equal = q[0].dim() == q[1].dim() && q[1].dim() == q[2].dim();

  const std::vector<Subspace> blocks{D.common, nn[0], nn[1], nn[2], m[0],
                                     m[1],     m[2],  whole_q, D.outside};
  rep.independent = independent_sum(blocks, tol);
  rep.block_dim_total = 0;
  for (const auto& b : blocks) rep.block_dim_total += b.dim();
  rep.spanning_deficit = n - join(std::span<const Subspace>(blocks), tol).dim();

  rep.residual = std::max(*std::max_element(rep.subspace_gaps.begin(), rep.subspace_gaps.end()),
                          *std::max_element(rep.triangle_gaps.begin(), rep.triangle_gaps.end()));

  if (D.change_of_basis.size() > 0) {
    const InvariantVector inv = D.invariants();
    double g = 1.0;
    if (D.change_of_basis.rows() == n && D.change_of_basis.cols() == n && total_mass(inv) > 0 &&
        total_dim(inv) == n) {
      const auto iso = verify_isomorphism(D.change_of_basis, S3, normal_form(inv), tol);
      g = iso.invertible ? iso.max_gap : 1.0;
    }
    rep.normal_form_gap = g;
    rep.residual = std::max(rep.residual, g);
  }

  rep.passes = rep.residual <= tol.residual_tol && rep.triangle_meets_zero &&
               rep.triangle_dims_equal && rep.independent && rep.spanning_deficit == 0 &&
               rep.block_dim_total == n;
  return rep;
}

// ---------------------------------------------------------------------------

DoubleTriangleForm normalize_double_triangle(const SubspaceSystem& Q3sys, const Tolerance& tol) {
  require_three(Q3sys, "normalize_double_triangle");
  if (!detect_double_triangle(Q3sys, tol)) {
    throw PreconditionFailure("double triangle",
                              "normalize_double_triangle: pairwise joins must be H and pairwise meets 0");
  }
  const Index n = Q3sys.ambient_dim();
  const Index k = n / 2;
  const Matrix& b1 = Q3sys[0].basis();
  const Matrix& b2 = Q3sys[1].basis();

  // R = Π1 + (I - P1) Π2 with Π_i the projections of H = E1 ⊕ E2. It fixes
  // E1 and moves E2 onto E1^⊥, so the image of E3 becomes a graph over E1.
  Matrix pair(n, n);
  pair << b1, b2;
  const Matrix coords = pair.fullPivLu().inverse();
  const Matrix oblique1 = b1 * coords.topRows(b1.cols());
  const Matrix oblique2 = b2 * coords.bottomRows(b2.cols());
  const Matrix perp = Matrix::Identity(n, n) - Q3sys[0].projector();
  const Matrix r = oblique1 + perp * oblique2;

  const Subspace moved = image(r, Q3sys[2], tol);
  const auto halmos = halmos_decompose(Q3sys[0], moved, tol);
  if (halmos.generic_multiplicity() != k) {
    throw ConditioningFailure("normalize_double_triangle: E3 is not in generic position (" +
                              std::to_string(halmos.generic_multiplicity()) + " angles, expected " +
                              std::to_string(k) + ")");
  }
  Eigen::VectorXd scale(n);
  for (Index i = 0; i < k; ++i) {
    const double theta = halmos.angles[static_cast<std::size_t>(i)];
    scale(i) = 1.0 / std::cos(theta);
    scale(k + i) = 1.0 / std::sin(theta);
  }
  DoubleTriangleForm out;
  out.k_dim = k;
  out.map = scale.asDiagonal() * (halmos.generic_basis.adjoint() * r);

  InvariantVector typical{};
  typical[7] = static_cast<int>(k);
  out.residual = verify_isomorphism(out.map, Q3sys, normal_form(typical), tol).max_gap;
  return out;
}

IsomorphismDecision is_isomorphic_three(const SubspaceSystem& A, const SubspaceSystem& B,
                                        const Tolerance& tol) {
  require_three(A, "is_isomorphic_three");
  require_three(B, "is_isomorphic_three");
  const auto da = brenner_decompose(A, tol);
  const auto db = brenner_decompose(B, tol);
  IsomorphismDecision out;
  out.first = da.invariants();
  out.second = db.invariants();
  out.isomorphic = out.first == out.second;
  if (!out.isomorphic) return out;

  // Both change-of-basis maps land on the same normal form.
  const Matrix t = db.change_of_basis.fullPivLu().solve(da.change_of_basis);
  out.report = verify_isomorphism(t, A, B, tol);
  out.map = t;
  return out;
}

}  // namespace relpos
