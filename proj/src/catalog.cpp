#include "relpos/catalog.hpp"

#include <cmath>

namespace relpos {

std::size_t atom_slot(int k) {
  static constexpr std::array<std::size_t, 9> slot{8, 4, 5, 6, 3, 2, 1, 0, 7};
  if (k < 1 || k > 9) throw InvalidArgument("atom index must be in 1..9, got " + std::to_string(k));
  return slot[static_cast<std::size_t>(k - 1)];
}

SubspaceSystem atom(int k) {
  MultiplicityVector v{};
  v[atom_slot(k)] = 1;
  return normal_form(v);
}

SubspaceSystem remark_example() {
  Matrix e1 = Matrix::Zero(3, 2), e2 = Matrix::Zero(3, 2), e3 = Matrix::Ones(3, 1);
  e1(0, 0) = e1(2, 1) = 1.0;
  e2(1, 0) = e2(2, 1) = 1.0;
  return SubspaceSystem(3, {span(e1), span(e2), span(e3)});
}

SubspaceSystem angled_lines(double theta) {
  if (!(theta > 0.0 && theta < M_PI / 2)) throw InvalidArgument("angled_lines: theta must lie in (0, pi/2)");
  Matrix first = Matrix::Zero(2, 1), second(2, 1);
  first(0, 0) = 1.0;
  second << std::cos(theta), std::sin(theta);
  return SubspaceSystem(2, {Subspace(first), Subspace(second)});
}

Matrix random_unitary(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  // Fixing the phases of diag(R) makes the distribution Haar.
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Matrix random_invertible(Index n, double cond_bound, std::mt19937_64& rng) {
  if (!(cond_bound >= 1.0)) throw InvalidArgument("condition bound must be at least 1");
  const Matrix u = random_unitary(n, rng);
  const Matrix v = random_unitary(n, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_cond = std::log(cond_bound);
  Eigen::VectorXd d(n);
  for (Index i = 0; i < n; ++i) d(i) = std::exp(unit(rng) * log_cond);
  d(0) = 1.0;
  if (n > 1) d(n - 1) = cond_bound;
  return u * d.asDiagonal() * v;
}

ComposedSystem compose_from_multiplicities(const MultiplicityVector& v, std::uint64_t seed,
                                           double cond_bound) {
  const SubspaceSystem base = normal_form(v);
  std::mt19937_64 rng(seed);
  Matrix t = random_invertible(base.ambient_dim(), cond_bound, rng);
  return ComposedSystem{transform(t, base), std::move(t)};
}

MultiplicityVector random_multiplicities(Index max_dim, std::mt19937_64& rng) {
  if (max_dim < 1) throw InvalidArgument("random_multiplicities: max_dim must be positive");
  std::uniform_int_distribution<Index> target_dist(1, max_dim);
  std::uniform_int_distribution<int> slot_dist(0, 8);
  const Index target = target_dist(rng);
  MultiplicityVector v{};
  Index used = 0;
  while (used < target) {
    const int slot = slot_dist(rng);
    const Index cost = slot == 7 ? 2 : 1;
    if (used + cost > target) continue;
    ++v[static_cast<std::size_t>(slot)];
    used += cost;
  }
  return v;
}

SubspaceSystem random_system(Index n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> dim_dist(0, n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Subspace> parts;
  for (int i = 0; i < 3; ++i) {
    Matrix g(n, dim_dist(rng));
    for (Index c = 0; c < g.cols(); ++c)
      for (Index r = 0; r < n; ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
    parts.push_back(span(g));
  }
  return SubspaceSystem(n, std::move(parts));
}

}  // namespace relpos
