#include "relpos/two_subspaces.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles/oracles.hpp"

using namespace relpos;

namespace {

double distance_to(const Subspace& s, const Vector& x) {
  return (x - s.basis() * (s.basis().adjoint() * x)).norm();
}

}  // namespace

TEST_CASE("two lines at angle theta") {
  const double theta = 0.7;
  Matrix a(2, 1), b(2, 1);
  a << 1, 0;
  b << std::cos(theta), std::sin(theta);
  const auto d = halmos_decompose(span(a), span(b));
  REQUIRE(d.angles.size() == 1);
  CHECK(d.angles[0] == doctest::Approx(theta));
  CHECK(d.part_11.is_zero());
  CHECK(d.part_10.is_zero());
  CHECK(d.part_01.is_zero());
  CHECK(d.part_00.is_zero());
  CHECK(d.generic_K.dim() == 1);

  const auto r = restricted_sum_operator(span(a), span(b));
  REQUIRE(r.per_angle_determinants.size() == 1);
  CHECK(r.per_angle_determinants[0] == doctest::Approx(std::sin(theta) * std::sin(theta)));
  CHECK(r.sigma_min == doctest::Approx(1.0 - std::cos(theta)));
  CHECK(r.sigma_max == doctest::Approx(1.0 + std::cos(theta)));
}

TEST_CASE("orthogonal and coinciding pairs have no generic part") {
  const std::vector<Index> x{0}, y{1};
  const Subspace ex = Subspace::coordinate(2, x), ey = Subspace::coordinate(2, y);
  auto d = halmos_decompose(ex, ey);
  CHECK(d.angles.empty());
  CHECK(d.part_10.dim() == 1);
  CHECK(d.part_01.dim() == 1);
  d = halmos_decompose(ex, ex);
  CHECK(d.part_11.dim() == 1);
  CHECK(d.part_00.dim() == 1);
  CHECK_THROWS_AS(restricted_sum_operator(Subspace::zero(2), Subspace::zero(2)), InvalidArgument);
}

TEST_CASE("SumOperator splits into unique components when the meet is zero") {
  oracle::Gen gen(21);
  const Subspace e1 = gen.subspace(6, 2), e2 = gen.subspace(6, 3);
  const SumOperator t(e1, e2);
  const Matrix x1 = e1.basis() * gen.gaussian(2, 4), x2 = e2.basis() * gen.gaussian(3, 4);
  const auto [a1, a2] = t.split(x1 + x2);
  CHECK((a1 - x1).norm() < 1e-9);
  CHECK((a2 - x2).norm() < 1e-9);
}

TEST_CASE("property: Halmos parts and generic basis") {
  oracle::Gen gen(22);
  for (int trial = 0; trial < 150; ++trial) {
    const Index n = gen.uniform(2, 12);
    // Shared columns give nontrivial intersections.
    const Matrix shared = gen.gaussian(n, gen.uniform(0, 1));
    Matrix a(n, 0), b(n, 0);
    const Index ka = gen.uniform(0, n - shared.cols()), kb = gen.uniform(0, n - shared.cols());
    a.resize(n, shared.cols() + ka);
    a << shared, gen.gaussian(n, ka);
    b.resize(n, shared.cols() + kb);
    b << shared, gen.gaussian(n, kb);
    const Subspace e1 = span(a), e2 = span(b);
    const auto d = halmos_decompose(e1, e2);

    const Index m = d.generic_multiplicity();
    CHECK(d.part_11.dim() == oracle::dim_meet(e1, e2));
    CHECK(d.part_11.dim() + d.part_10.dim() + d.part_01.dim() + d.part_00.dim() + 2 * m == n);
    CHECK(d.part_11.dim() + d.part_10.dim() + m == e1.dim());
    CHECK(d.part_11.dim() + d.part_01.dim() + m == e2.dim());
    CHECK(d.generic_K.dim() == m);
    CHECK(contains(e1, d.generic_K));

    const std::vector<Subspace> parts{d.part_11, d.part_10, d.part_01, d.part_00,
                                      span(d.generic_basis)};
    CHECK(independent_sum(parts));
    CHECK((d.generic_basis.adjoint() * d.generic_basis - Matrix::Identity(2 * m, 2 * m)).norm() < 1e-9);
    for (Index i = 0; i < m; ++i) {
      const double c = std::cos(d.angles[static_cast<std::size_t>(i)]);
      const double s = std::sin(d.angles[static_cast<std::size_t>(i)]);
      CHECK(distance_to(e1, d.generic_basis.col(i)) < 1e-9);
      CHECK(distance_to(e2, c * d.generic_basis.col(i) + s * d.generic_basis.col(m + i)) < 1e-9);
    }
  }
}

TEST_CASE("property: restricted sum operator determinants are sin^2") {
  oracle::Gen gen(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = gen.uniform(2, 12);
    const Subspace e1 = gen.subspace(n, gen.uniform(1, n)), e2 = gen.subspace(n, gen.uniform(1, n));
    const auto r = restricted_sum_operator(e1, e2);
    REQUIRE(r.per_angle_determinants.size() == r.angles.size());
    for (std::size_t i = 0; i < r.angles.size(); ++i) {
      const double s = std::sin(r.angles[i]);
      CHECK(std::abs(r.per_angle_determinants[i] - s * s) < 1e-9);
    }
    CHECK(r.sigma_min > 0.0);
    CHECK(r.sigma_max <= 2.0 + 1e-12);
  }
}
