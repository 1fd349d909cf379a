#include "relpos/two_subspaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail/numerics.hpp"
#include "detail/svd.hpp"

namespace relpos {

namespace {

// Modified Gram-Schmidt in column order. Used where the column pairing must
// survive re-orthonormalization.
Matrix gram_schmidt(Matrix m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < j; ++i) {
      const Complex c = m.col(i).dot(m.col(j));
      m.col(j) -= c * m.col(i);
    }
    const double nrm = m.col(j).norm();
    if (nrm > 0.0) m.col(j) /= nrm;
  }
  return m;
}

Matrix pick_columns(const Matrix& m, const std::vector<Index>& idx) {
  Matrix out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Index>(j)) = m.col(idx[j]);
  return out;
}

}  // namespace

TwoSubspaceDecomposition halmos_decompose(const Subspace& E1, const Subspace& E2,
                                          const Tolerance& tol) {
  require_same_ambient(E1, E2, "halmos_decompose");
  const Index n = E1.ambient_dim(), ka = E1.dim(), kb = E2.dim();
  const Matrix& qa = E1.basis();
  const Matrix& qb = E2.basis();
  const double small = std::sin(tol.angle_eps);

  Matrix part11 = Matrix(n, 0), part10 = Matrix(n, 0), part01 = Matrix(n, 0);
  Matrix a = Matrix(n, 0), w = Matrix(n, 0);
  std::vector<double> angles;

  if (ka == 0 || kb == 0) {
    part10 = qa;
    part01 = qb;
  } else {
    const Matrix cross = qb.adjoint() * qa;  // kb x ka, singular values = cosines
    const detail::Svd cos_svd = detail::svd(cross, detail::SvdVectors::full);
    const RealVector& cosv = cos_svd.values;
    const Index p = cosv.size();

    // E1 ∩ E2^⊥ and E1^⊥ ∩ E2: cosines below sin(angle_eps), plus the
    // directions with no partner when the dimensions differ.
    std::vector<Index> perp_a, perp_b;
    for (Index i = 0; i < ka; ++i)
      if (i >= p || cosv(i) <= small) perp_a.push_back(i);
    for (Index i = 0; i < kb; ++i)
      if (i >= p || cosv(i) <= small) perp_b.push_back(i);
    const Matrix ya_perp = pick_columns(cos_svd.v, perp_a);
    part10 = qa * ya_perp;
    part01 = qb * pick_columns(cos_svd.u, perp_b);

    // E1 ∩ E2: sines below sin(angle_eps). Sines come from (I - P2) Qa so
    // that tiny angles are resolved; cosines near 1 are not.
    const Matrix resid = qa - qb * cross;
    const detail::Svd sin_svd = detail::svd(resid, detail::SvdVectors::full);
    const RealVector& sinv = sin_svd.values;
    std::vector<Index> tiny;
    for (Index i = 0; i < sinv.size(); ++i)
      if (sinv(i) <= small) tiny.push_back(i);
    const Matrix ya_common = pick_columns(sin_svd.v, tiny);
    part11 = qa * ya_common;

    // Generic coordinates inside E1: what is left after both endpoint sets.
    const Index ends = ya_common.cols() + ya_perp.cols();
    Matrix gen_coords;
    if (ends == 0) {
      gen_coords = Matrix::Identity(ka, ka);
    } else if (ends >= ka) {
      gen_coords = Matrix(ka, 0);
    } else {
      Matrix endpoints(ka, ends);
      endpoints << ya_common, ya_perp;
      gen_coords = detail::complement_columns(detail::leading_left_singular(endpoints, ends));
    }

    const Index m = gen_coords.cols();
    if (m > 0) {
      // Diagonalize Qa^H P2 Qa on the generic coordinates: eigenvalues cos^2.
      const Matrix cg = cross * gen_coords;
      Eigen::SelfAdjointEigenSolver<Matrix> eig(detail::hermitian_part(cg.adjoint() * cg));
      // Ascending cos^2 means descending angle; reverse for ascending angles.
      Matrix vecs = eig.eigenvectors().rowwise().reverse();
      a = gram_schmidt(qa * (gen_coords * vecs));
      w = Matrix(n, m);
      angles.resize(static_cast<std::size_t>(m));
      for (Index i = 0; i < m; ++i) {
        const Vector ai = a.col(i);
        const Vector p2a = qb * (qb.adjoint() * ai);
        const double c = p2a.norm();
        const double s = (ai - p2a).norm();
        angles[static_cast<std::size_t>(i)] = std::atan2(s, c);
        // (I - P1) P2 a_i is orthogonal to E1 and spans, with a_i, the plane
        // containing a_i's partner in E2.
        w.col(i) = p2a - qa * (qa.adjoint() * p2a);
      }
      w = gram_schmidt(w);
      // Eigenvalue order is by cos^2; recompute order from the accurate angles.
      std::vector<Index> order(static_cast<std::size_t>(m));
      std::iota(order.begin(), order.end(), Index{0});
      std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
        return angles[static_cast<std::size_t>(x)] < angles[static_cast<std::size_t>(y)];
      });
      std::vector<double> sorted(angles.size());
      for (std::size_t j = 0; j < order.size(); ++j) sorted[j] = angles[static_cast<std::size_t>(order[j])];
      angles = std::move(sorted);
      a = pick_columns(a, order);
      w = pick_columns(w, order);
    }
  }

  const Index m = a.cols();
  Matrix generic(n, 2 * m);
  generic.leftCols(m) = a;
  generic.rightCols(m) = w;

  Matrix used(n, part11.cols() + part10.cols() + part01.cols() + 2 * m);
  used << part11, part10, part01, generic;
  if (used.cols() > n) {
    throw ConditioningFailure("halmos_decompose: parts overlap numerically (" +
                              std::to_string(used.cols()) + " directions in C^" +
                              std::to_string(n) + ")");
  }
  Matrix rest = detail::complement_columns(detail::leading_left_singular(used, used.cols()));

  return TwoSubspaceDecomposition{
      from_orthonormal_unchecked(n, std::move(part11)),
      from_orthonormal_unchecked(n, std::move(part10)),
      from_orthonormal_unchecked(n, std::move(part01)),
      from_orthonormal_unchecked(n, std::move(rest)),
      from_orthonormal_unchecked(n, a),
      std::move(angles),
      std::move(generic),
  };
}

// ---------------------------------------------------------------------------

SumOperator::SumOperator(const Subspace& E1, const Subspace& E2, const Tolerance& tol)
    : e1_(E1.basis()), e2_(E2.basis()), range_(join(E1, E2, tol)) {
  require_same_ambient(E1, E2, "restricted_sum_operator");
  if (range_.is_zero()) throw InvalidArgument("restricted_sum_operator: E1 + E2 = 0");
  const Matrix& wb = range_.basis();
  const Matrix ca = wb.adjoint() * e1_;
  const Matrix cb = wb.adjoint() * e2_;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(detail::hermitian_part(ca * ca.adjoint() + cb * cb.adjoint()));
  eigvecs_ = eig.eigenvectors();
  eigvals_ = eig.eigenvalues();
  sigma_min_ = eigvals_(0);
  sigma_max_ = eigvals_(eigvals_.size() - 1);
}

std::pair<Matrix, Matrix> SumOperator::split(const Matrix& vectors) const {
  const Matrix& wb = range_.basis();
  Matrix z = eigvecs_.adjoint() * (wb.adjoint() * vectors);
  for (Index i = 0; i < z.rows(); ++i) z.row(i) /= eigvals_(i);
  const Matrix u = wb * (eigvecs_ * z);
  Matrix first = e1_ * (e1_.adjoint() * u);
  Matrix second = e2_ * (e2_.adjoint() * u);
  return {std::move(first), std::move(second)};
}

SumOperatorReport restricted_sum_operator(const Subspace& E1, const Subspace& E2,
                                          const Tolerance& tol) {
  SumOperator op(E1, E2, tol);
  SumOperatorReport rep;
  rep.sigma_min = op.sigma_min();
  rep.sigma_max = op.sigma_max();
  rep.condition = rep.sigma_max / rep.sigma_min;

  const auto halmos = halmos_decompose(E1, E2, tol);
  rep.angles = halmos.angles;
  const Index m = halmos.generic_multiplicity();
  for (Index i = 0; i < m; ++i) {
    Matrix plane(E1.ambient_dim(), 2);
    plane.col(0) = halmos.generic_basis.col(i);
    plane.col(1) = halmos.generic_basis.col(m + i);
    const Matrix pa = E1.basis().adjoint() * plane;
    const Matrix pb = E2.basis().adjoint() * plane;
    const Matrix block = pa.adjoint() * pa + pb.adjoint() * pb;
    rep.per_angle_determinants.push_back((block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0)).real());
  }
  return rep;
}

}  // namespace relpos
