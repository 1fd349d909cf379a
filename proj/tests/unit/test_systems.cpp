#include "relpos/systems.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles/oracles.hpp"
#include "relpos/catalog.hpp"

using namespace relpos;

namespace {

SubspaceSystem coordinate_pair() {
  const std::vector<Index> x{0}, y{1};
  return SubspaceSystem(2, {Subspace::coordinate(2, x), Subspace::coordinate(2, y)});
}

}  // namespace

TEST_CASE("system construction validates ambients and labels") {
  CHECK_THROWS_AS(SubspaceSystem(2, {Subspace::whole(3)}), DimensionMismatch);
  CHECK_THROWS_AS(SubspaceSystem(2, {Subspace::whole(2)}, {"A", "B"}), InvalidArgument);
  const SubspaceSystem s(2, {Subspace::whole(2), Subspace::zero(2)});
  CHECK(s.labels() == std::vector<std::string>{"E1", "E2"});
  CHECK(s.dims() == std::vector<Index>{2, 0});
}

TEST_CASE("tilted lines are isomorphic to the coordinate pair but not commutative") {
  const double theta = 0.4;
  const SubspaceSystem tilted = angled_lines(theta);
  const SubspaceSystem straight = coordinate_pair();
  CHECK_FALSE(is_commutative(tilted));
  CHECK(is_commutative(straight));

  Matrix frame(2, 2);
  frame << 1, std::cos(theta), 0, std::sin(theta);
  const LinearMap t = frame.inverse();
  const auto report = verify_isomorphism(t, tilted, straight);
  CHECK(report.passes);
  CHECK(report.max_gap < 1e-12);
  CHECK_FALSE(verify_isomorphism(Matrix::Identity(2, 2), tilted, straight).passes);
}

TEST_CASE("the tilted pair is decomposable") {
  const SubspaceSystem tilted = angled_lines(0.4);
  CHECK_FALSE(is_transitive(tilted));
  const auto w = find_nontrivial_idempotent(tilted);
  REQUIRE(w.has_value());
  CHECK_NOTHROW(check_witness(tilted, *w));
  const SplitResult parts = split_by_idempotent(tilted, *w);
  CHECK(parts.first.ambient_dim() + parts.second.ambient_dim() == 2);
  const SubspaceSystem rebuilt = direct_sum(parts.first, parts.second);
  CHECK(verify_isomorphism(parts.embedding, rebuilt, tilted).passes);
}

TEST_CASE("the three-line double triangle is indecomposable and transitive") {
  const SubspaceSystem dt = atom(9);
  CHECK(detect_double_triangle(dt));
  CHECK(is_transitive(dt));
  CHECK_FALSE(find_nontrivial_idempotent(dt).has_value());
  CHECK_FALSE(is_commutative(dt));
  CHECK_FALSE(detect_pentagon(dt));
}

TEST_CASE("check_witness rejects trivial and non-idempotent maps") {
  const SubspaceSystem s = coordinate_pair();
  IdempotentWitness identity{Matrix::Identity(2, 2), Subspace::whole(2), Subspace::zero(2)};
  CHECK_THROWS_AS(check_witness(s, identity), InvalidArgument);
  Matrix not_idem = Matrix::Identity(2, 2);
  not_idem(0, 0) = 2.0;
  not_idem(1, 1) = 0.0;
  const std::vector<Index> x{0}, y{1};
  IdempotentWitness bad{not_idem, Subspace::coordinate(2, x), Subspace::coordinate(2, y)};
  CHECK_THROWS_AS(check_witness(s, bad), InvalidArgument);
}

TEST_CASE("hom residual of a non-homomorphism") {
  const SubspaceSystem s = coordinate_pair();
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(hom_residual(swap, s, s) == doctest::Approx(1.0));
  CHECK(hom_residual(Matrix::Identity(2, 2), s, s) == 0.0);
}

TEST_CASE("linear independence") {
  const std::vector<Index> x{0}, y{1};
  Matrix d(2, 1);
  d << 1, 1;
  const std::vector<Subspace> two{Subspace::coordinate(2, x), Subspace::coordinate(2, y)};
  const std::vector<Subspace> three{two[0], two[1], span(d)};
  CHECK(are_linearly_independent(two));
  CHECK_FALSE(are_linearly_independent(three));
}

TEST_CASE("pentagon is never detected in finite dimension") {
  oracle::Gen gen(31);
  for (int trial = 0; trial < 200; ++trial) CHECK_FALSE(detect_pentagon(gen.system3(gen.uniform(1, 6))));
}

TEST_CASE("property: Hom dimension agrees with the Kronecker oracle") {
  oracle::Gen gen(32);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = gen.uniform(1, 5), m = gen.uniform(1, 5);
    const SubspaceSystem s(n, {gen.subspace(n), gen.subspace(n), gen.subspace(n)});
    const SubspaceSystem t(m, {gen.subspace(m), gen.subspace(m), gen.subspace(m)});
    const HomBasis h = hom_basis(s, t);
    CHECK(static_cast<Index>(h.dim()) == oracle::hom_dim(s, t));
    for (const LinearMap& x : h.basis) CHECK(hom_residual(x, s, t) < 1e-9);
  }
}

TEST_CASE("property: Hom dimension on structured systems") {
  // Random subspaces are in general position; sums of atoms exercise the
  // degenerate intersections.
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const auto v = random_multiplicities(8, rng), w = random_multiplicities(8, rng);
    const auto s = compose_from_multiplicities(v, rng(), 5.0).system;
    const auto t = compose_from_multiplicities(w, rng(), 5.0).system;
    CHECK(static_cast<Index>(hom_basis(s, t).dim()) == oracle::hom_dim(s, t));
  }
}

TEST_CASE("property: idempotents split direct sums back into their halves") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = compose_from_multiplicities(random_multiplicities(10, rng), rng(), 10.0).system;
    const auto w = find_nontrivial_idempotent(s);
    if (!w) continue;
    check_witness(s, *w);
    const SplitResult parts = split_by_idempotent(s, *w);
    CHECK(parts.first.ambient_dim() == w->range.dim());
    CHECK(parts.second.ambient_dim() == w->kernel.dim());
    CHECK(verify_isomorphism(parts.embedding, direct_sum(parts.first, parts.second), s).passes);
  }
}

TEST_CASE("property: transform preserves isomorphism type") {
  oracle::Gen gen(35);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = gen.uniform(1, 7);
    const SubspaceSystem s = gen.system3(n);
    const Matrix t = gen.gaussian(n, n);
    const SubspaceSystem ts = transform(t, s);
    CHECK(ts.dims() == s.dims());
    CHECK(verify_isomorphism(t, s, ts).passes);
  }
}
