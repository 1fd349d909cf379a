#include "relpos/pentagon.hpp"

#include <algorithm>
#include <cmath>

#include "detail/numerics.hpp"
#include "relpos/two_subspaces.hpp"

namespace relpos {

std::string to_string(PentagonCase c) {
  return c == PentagonCase::escapes_sum ? "case_i" : "case_ii";
}

namespace {

Subspace join3(const Subspace& a, const Subspace& b, const Subspace& c, const Tolerance& tol) {
  const std::vector<Subspace> parts{a, b, c};
  return join(std::span<const Subspace>(parts), tol);
}

double column_residual(const Matrix& m) { return m.size() == 0 ? 0.0 : m.colwise().norm().maxCoeff(); }

// Re-expresses `part` (contained in `host`) in the orthonormal coordinates of host.
Subspace restrict_to(const Subspace& host, const Subspace& part) {
  return from_orthonormal_unchecked(
      host.dim(), detail::leading_left_singular(host.basis().adjoint() * part.basis(), part.dim()));
}

}  // namespace

PentagonSplit pentagon_split(const SubspaceSystem& S3, const Tolerance& tol) {
  if (S3.size() != 3) {
    throw InvalidArgument("pentagon_split: expected 3 subspaces, got " + std::to_string(S3.size()));
  }
  const Index n = S3.ambient_dim();
  const Subspace& e1 = S3[0];
  const Subspace& e2 = S3[1];
  const Subspace& e3 = S3[2];
  if (!meet(e1, e2, tol).is_zero()) {
    throw PreconditionFailure("E1 ∧ E2 = 0", "pentagon_split: E1 and E2 intersect");
  }
  if (!contains(e3, e2, tol)) {
    throw PreconditionFailure("E2 ⊆ E3", "pentagon_split: E2 is not contained in E3");
  }
  if (e3.dim() <= e2.dim()) {
    throw PreconditionFailure("E2 ≠ E3", "pentagon_split: E2 = E3, the inclusion must be strict");
  }

  const Subspace sum12 = join(e1, e2, tol);
  const Subspace inside = meet(e3, sum12, tol);
  const Subspace f3 = relative_complement(e3, inside, tol);
  const Subspace quotient = relative_complement(inside, e2, tol);
  const Index k = quotient.dim();

  Matrix u = quotient.basis(), v(n, 0), w(n, 0);
  if (k > 0) {
    std::tie(v, w) = SumOperator(e1, e2, tol).split(u);
  }
  const Subspace n2 = span(v, tol);
  if (n2.dim() != k) {
    throw ConditioningFailure("pentagon_split: E1-components of the quotient basis lost rank");
  }
  const Subspace e1_reduced = relative_complement(e1, n2, tol);
  const Subspace e3_reduced = join(e2, f3, tol);

  double resid = std::max({column_residual(u - v - w),
                           column_residual(v - e1.basis() * (e1.basis().adjoint() * v)),
                           column_residual(w - e2.basis() * (e2.basis().adjoint() * w))});

  PentagonSplit out{f3.is_zero() ? PentagonCase::within_sum : PentagonCase::escapes_sum,
                    n2,
                    f3,
                    e1_reduced,
                    e3_reduced,
                    std::nullopt,
                    std::nullopt,
                    std::nullopt,
                    u,
                    v,
                    w};

  if (out.kind == PentagonCase::within_sum) {
    out.n1 = e2;
    out.m1 = e1_reduced;
    const std::vector<Subspace> parts{e2, n2, e1_reduced};
    out.independent = independent_sum(parts, tol) &&
                      join3(e2, n2, e1_reduced, tol).dim() == sum12.dim();
    resid = std::max({resid, gap(e1, join(n2, e1_reduced, tol)), gap(e3, join(e2, n2, tol))});
  } else {
    const std::vector<Subspace> parts{n2, e1_reduced, e2, f3};
    out.independent = independent_sum(parts, tol) && meet(e1_reduced, e3_reduced, tol).is_zero() &&
                      e3_reduced.dim() > e2.dim() && contains(e3_reduced, e2, tol) &&
                      e3.dim() == e2.dim() + k + f3.dim();
    resid = std::max({resid, gap(e1, join(e1_reduced, n2, tol)), gap(e3, join(e3_reduced, n2, tol))});
    const Subspace host = join(e1_reduced, e3_reduced, tol);
    out.pentagon_part = SubspaceSystem(host.dim(),
                                       {restrict_to(host, e1_reduced), restrict_to(host, e2),
                                        restrict_to(host, e3_reduced)},
                                       {"E1'", "E2'", "E3'"});
  }
  if (k > 0) resid = std::max(resid, column_residual(v - e3.basis() * (e3.basis().adjoint() * v)));
  out.identity_residual = resid;
  return out;
}

SubspaceSystem example9_truncated(Index n) {
  if (n < 2) throw InvalidArgument("example9_truncated: n must be at least 2");
  const Index h = 2 * n;
  Matrix first = Matrix::Zero(h, n + 1);
  Matrix graph = Matrix::Zero(h, n);
  Vector f = Vector::Zero(h), v = Vector::Zero(h);
  for (Index j = 0; j < n; ++j) {
    const double a = 1.0 / static_cast<double>(j + 1);
    first(j, j) = 1.0;
    graph(j, j) = 1.0;
    graph(n + j, j) = a;
    f(n + j) = a;
    if (j > 0) v(n + j) = a;
  }
  first.col(n) = v;
  Matrix third(h, n + 2);
  third << graph, f, v;
  return SubspaceSystem(h, {span(first), span(graph), span(third)});
}

ClosednessMargin closedness_margin(const Subspace& A, const Subspace& B, const Tolerance& tol) {
  require_same_ambient(A, B, "closedness_margin");
  if (A.is_zero() || B.is_zero()) throw InvalidArgument("closedness_margin: both subspaces must be nonzero");
  for (double theta : principal_angles(A, B)) {
    if (theta > tol.angle_eps) return ClosednessMargin{theta, A.ambient_dim()};
  }
  throw PreconditionFailure("positive angle", "closedness_margin: every principal angle is zero");
}

ClosednessMargin diagonal_graph_margin(Index n, const Tolerance& tol) {
  if (n < 1) throw InvalidArgument("diagonal_graph_margin: n must be positive");
  // Columns (e_j, a_j e_j) / sqrt(1 + a_j^2) are already orthonormal.
  Matrix graph = Matrix::Zero(2 * n, n);
  for (Index j = 0; j < n; ++j) {
    const double a = 1.0 / static_cast<double>(j + 1);
    const double scale = 1.0 / std::sqrt(1.0 + a * a);
    graph(j, j) = scale;
    graph(n + j, j) = a * scale;
  }
  std::vector<Index> coords(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) coords[static_cast<std::size_t>(j)] = j;
  auto margin = closedness_margin(Subspace::coordinate(2 * n, coords),
                                   from_orthonormal_unchecked(2 * n, std::move(graph)), tol);
  margin.truncation_dim = n;
  return margin;
}

}  // namespace relpos
