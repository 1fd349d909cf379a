// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles/oracles.hpp"
#include "relpos/commands.hpp"
#include "relpos/relpos.hpp"

using namespace relpos;
namespace fs = std::filesystem;

namespace {

constexpr int kCorpusSize = 200;
constexpr Index kCorpusMaxDim = 30;
constexpr double kCorpusCond = 20.0;
constexpr double kResidualBound = 1e-8;
constexpr double kAngleBound = 1e-9;
constexpr double kRecoverySeconds = 30.0;

struct CorpusEntry {
  InvariantVector v;
  std::uint64_t seed;
};

// Every atom appears twice on its own so the mass-1 side of the
// decomposability check is exercised; the rest are random.
std::vector<CorpusEntry> make_corpus() {
  std::mt19937_64 rng(20240601);
  std::vector<CorpusEntry> out;
  for (int rep = 0; rep < 2; ++rep) {
    for (int k = 1; k <= 9; ++k) {
      InvariantVector v{};
      v[atom_slot(k)] = 1;
      out.push_back({v, rng()});
    }
  }
  while (static_cast<int>(out.size()) < kCorpusSize) out.push_back({random_multiplicities(kCorpusMaxDim, rng), rng()});
  return out;
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Largest gap between map(E_i) and the i-th subspace of the target.
double image_residual(const LinearMap& map, const SubspaceSystem& from, const SubspaceSystem& to) {
  double worst = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Subspace img = span(map * from[i].basis());
    worst = std::max(worst, img.dim() == to[i].dim() ? gap(img, to[i]) : 1.0);
  }
  return worst;
}

void brenner_recovery(const std::vector<CorpusEntry>& corpus) {
  int recovered = 0;
  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [v, seed] : corpus) {
    const auto system = compose_from_multiplicities(v, seed, kCorpusCond).system;
    const auto d = brenner_decompose(system);
    const auto check = verify_brenner(system, d);
    worst = std::max(worst, check.residual);
    if (d.invariants() == v && check.residual <= kResidualBound) ++recovered;
  }
  const double elapsed = seconds_since(t0);
  report(1, "brenner recovery", recovered == kCorpusSize && elapsed < kRecoverySeconds,
         fmt("%d/%d recovered, worst residual %.2e, %.1f s", recovered, kCorpusSize, worst, elapsed));
}

void decomposability_agreement(const std::vector<CorpusEntry>& corpus) {
  int disagreements = 0, mass_one = 0;
  for (const auto& [v, seed] : corpus) {
    const auto system = compose_from_multiplicities(v, seed, kCorpusCond).system;
    const bool single = total_mass(v) == 1;
    mass_one += single;
    const auto w = find_nontrivial_idempotent(system, {}, {8, 7, 1e-6});
    if (w.has_value() == single) ++disagreements;
  }
  report(4, "decomposability agreement", disagreements == 0,
         fmt("%d disagreements over %d systems (%d of mass 1)", disagreements, kCorpusSize, mass_one));
}

Subspace line3(double a, double b, double c) {
  Matrix m(3, 1);
  m << a, b, c;
  return span(m);
}

BrennerDecomposition remark_decomposition(double q1_tail, double q2_tail) {
  const Subspace z = Subspace::zero(3);
  return BrennerDecomposition{z,  {z, z, line3(0, 0, 1)}, {z, z, z}, {line3(1, 0, q1_tail), line3(0, 1, q2_tail), line3(1, 1, 1)},
                              z,  {},                     0.0,       {},
                              true, {}};
}

SubspaceSystem restrict_triangle(const std::array<Subspace, 3>& q) {
  const Subspace host = join(q[0], q[1]);
  std::vector<Subspace> parts;
  for (const Subspace& s : q) parts.push_back(span(host.basis().adjoint() * s.basis()));
  return SubspaceSystem(host.dim(), parts);
}

void golden_values() {
  bool ok = brenner_invariants(atom(9))[7] == 1;
  for (int k = 1; k <= 9; ++k) {
    InvariantVector e{};
    e[atom_slot(k)] = 1;
    ok = ok && brenner_invariants(atom(k)) == e;
  }
  const SubspaceSystem remark = remark_example();
  const InvariantVector rv = brenner_invariants(remark);
  ok = ok && rv == InvariantVector{0, 0, 0, 1, 0, 0, 0, 1, 0};
  const auto first = remark_decomposition(0.5, 0.5), second = remark_decomposition(1.0 / 3.0, 2.0 / 3.0);
  const auto r1 = verify_brenner(remark, first), r2 = verify_brenner(remark, second);
  const bool distinct = !same_subspace(first.double_triangle_part(), second.double_triangle_part());
  ok = ok && r1.passes && r2.passes && distinct;
  report(2, "golden values", ok,
         fmt("atoms unit, remark N3=%d K=%d, both decompositions verify (%.2e, %.2e), Q != Q' %s", rv[3], rv[7],
             r1.residual, r2.residual, distinct ? "yes" : "no"));
}

void isomorphism_completeness() {
  std::mt19937_64 rng(31337);
  int positive = 0, negative = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto v = random_multiplicities(20, rng);
    const auto a = compose_from_multiplicities(v, rng(), kCorpusCond).system;
    const auto b = compose_from_multiplicities(v, rng(), kCorpusCond).system;
    const auto dec = is_isomorphic_three(a, b);
    if (dec.isomorphic && dec.map) {
      const double r = image_residual(*dec.map, a, b);
      worst = std::max(worst, r);
      const double smin = oracle::jacobi_singular_values(*dec.map).minCoeff();
      if (r <= kResidualBound && smin > 0.0 && dec.report && dec.report->passes) ++positive;
    }
  }
  for (int i = 0; i < 50; ++i) {
    // Same ambient dimension, one unit moved between non-K slots.
    InvariantVector v = random_multiplicities(20, rng);
    std::vector<std::size_t> filled;
    for (std::size_t s = 0; s < 9; ++s)
      if (s != 7 && v[s] > 0) filled.push_back(s);
    if (filled.empty()) v[0] += 1, filled.push_back(0);
    const std::size_t from = filled[rng() % filled.size()];
    std::size_t to = rng() % 8;
    if (to >= 7) ++to;
    if (to == from) to = from == 8 ? 0 : (from + 1 == 7 ? 8 : from + 1);
    InvariantVector w = v;
    w[from] -= 1;
    w[to] += 1;
    if (total_mass(w) == 0) w[to] += 1, v[0] += 1;
    const auto a = compose_from_multiplicities(v, rng(), kCorpusCond).system;
    const auto b = compose_from_multiplicities(w, rng(), kCorpusCond).system;
    if (!is_isomorphic_three(a, b).isomorphic) ++negative;
  }
  report(3, "isomorphism completeness", positive == 50 && negative == 50,
         fmt("%d/50 equal pairs with verified map (worst %.2e), %d/50 differing pairs rejected", positive, worst,
             negative));
}

void two_subspace_identities() {
  oracle::Gen gen(5150);
  double angle_err = 0.0, det_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index n = gen.uniform(2, 12);
    const Subspace a = gen.subspace(n, gen.uniform(1, n)), b = gen.subspace(n, gen.uniform(1, n));
    const auto got = principal_angles(a, b);
    const auto want = oracle::principal_angles(a, b);
    if (got.size() != want.size()) angle_err = 1.0;
    for (std::size_t k = 0; k < std::min(got.size(), want.size()); ++k)
      angle_err = std::max(angle_err, std::abs(got[k] - want[k]));
    const auto op = restricted_sum_operator(a, b);
    for (std::size_t k = 0; k < op.angles.size(); ++k) {
      const double s = std::sin(op.angles[k]);
      det_err = std::max(det_err, std::abs(op.per_angle_determinants[k] - s * s));
    }
  }
  report(5, "two-subspace identities", angle_err <= kAngleBound && det_err <= kAngleBound,
         fmt("max angle error %.2e, max det - sin^2 error %.2e", angle_err, det_err));
}

void double_triangle_normalization() {
  bool ok = true;
  double worst = 0.0;
  for (const auto& d : {remark_decomposition(0.5, 0.5), remark_decomposition(1.0 / 3.0, 2.0 / 3.0)}) {
    const SubspaceSystem q = restrict_triangle(d.triangle);
    const auto form = normalize_double_triangle(q);
    const double r = image_residual(form.map, q, normal_form(InvariantVector{0, 0, 0, 0, 0, 0, 0, 1, 0}));
    worst = std::max({worst, r, form.residual});
    ok = ok && form.k_dim == 1 && r <= kResidualBound;
  }
  int sums = 0;
  for (int m = 1; m <= 8; ++m) {
    InvariantVector v{};
    v[7] = m;
    const auto q = compose_from_multiplicities(v, 1000 + static_cast<std::uint64_t>(m), kCorpusCond).system;
    const auto form = normalize_double_triangle(q);
    const double r = image_residual(form.map, q, normal_form(v));
    worst = std::max({worst, r, form.residual});
    if (form.k_dim == m && r <= kResidualBound) ++sums;
  }
  report(6, "double-triangle normalization", ok && sums == 8,
         fmt("remark Q and Q' map to the typical form, %d/8 scrambled m-fold sums, worst image residual %.2e", sums,
             worst));
}

void no_finite_pentagon() {
  std::mt19937_64 rng(404);
  int random_hits = 0, truncation_hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Index n = 1 + static_cast<Index>(rng() % 8);
    random_hits += detect_pentagon(random_system(n, rng));
  }
  for (Index n = 2; n <= 100; ++n) truncation_hits += detect_pentagon(example9_truncated(n));
  report(7, "no finite pentagon", random_hits == 0 && truncation_hits == 0,
         fmt("%d/1000 random systems, %d/99 truncations detected as pentagons", random_hits, truncation_hits));
}

void pentagon_margin_law() {
  bool ok = true;
  double previous = 2.0, worst = 0.0;
  std::string margins;
  for (Index n : {10, 100, 1000}) {
    const double m = diagonal_graph_margin(n).min_positive_angle;
    const double err = std::abs(m - std::atan(1.0 / static_cast<double>(n)));
    worst = std::max(worst, err);
    ok = ok && err <= kAngleBound && m < previous;
    previous = m;
    margins += fmt(" %.6e", m);
  }
  report(8, "pentagon margin law", ok, fmt("margins%s, max |margin - atan(1/n)| %.2e", margins.c_str(), worst));
}

void pentagon_split_identities() {
  const fs::path dir(RELPOS_FIXTURE_DIR);
  const SubspaceSystem within = read_system_file(dir / "case_ii.json").system;
  const PentagonSplit a = pentagon_split(within);
  const Subspace& n1 = a.n1.value();
  const Subspace& m1 = a.m1.value();
  const bool ii = a.kind == PentagonCase::within_sum && same_subspace(within[0], join(a.n2, m1)) &&
                  same_subspace(within[1], n1) && same_subspace(within[2], join(n1, a.n2)) &&
                  oracle::rank(oracle::stack({&n1, &a.n2, &m1})) == n1.dim() + a.n2.dim() + m1.dim();

  const SubspaceSystem escapes = read_system_file(dir / "case_i.json").system;
  const PentagonSplit b = pentagon_split(escapes);
  const Index parts = b.n2.dim() + b.e1_reduced.dim() + escapes[1].dim() + b.f3.dim();
  const bool i = b.kind == PentagonCase::escapes_sum &&
                 oracle::rank(oracle::stack({&b.n2, &b.e1_reduced, &escapes[1], &b.f3})) == parts &&
                 oracle::dim_meet(b.e1_reduced, b.e3_reduced) == 0 && contains(b.e3_reduced, escapes[1]) &&
                 b.e3_reduced.dim() > escapes[1].dim();
  report(9, "pentagon split identities", ii && i && a.independent && b.independent,
         fmt("case_ii %s (residual %.2e), case_i %s (residual %.2e)", ii ? "holds" : "fails", a.identity_residual,
             i ? "holds" : "fails", b.identity_residual));
}

void cli_round_trip(const std::vector<CorpusEntry>& corpus) {
  const fs::path root = fs::temp_directory_path() / ("relpos_acceptance_" + std::to_string(::getpid()));
  const fs::path first = root / "a", second = root / "b";
  fs::create_directories(first);
  fs::create_directories(second);
  int recovered = 0, stable = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::string name = fmt("sys_%03zu.json", i);
    const auto& [v, seed] = corpus[i];
    const bool wrote = cmd_generate(v, seed, kCorpusCond, first / name, {}).exit_code == kExitOk &&
                       cmd_generate(v, seed, kCorpusCond, second / name, {}).exit_code == kExitOk;
    if (!wrote) continue;
    const auto truth = nlohmann::json::parse(read_file(truth_path_for(first / name)));
    const CommandResult r1 = cmd_decompose(first / name, {});
    const CommandResult r2 = cmd_decompose(first / name, {});
    if (r1.exit_code == kExitOk && r1.report["invariant_vector"].get<InvariantVector>() == truth["vector"].get<InvariantVector>()) ++recovered;
    if (read_file(first / name) == read_file(second / name) && r1.report.dump(2) == r2.report.dump(2)) ++stable;
  }
  fs::remove_all(root);
  const int n = static_cast<int>(corpus.size());
  report(10, "CLI round trip", recovered == n && stable == n,
         fmt("%d/%d sidecar vectors recovered, %d/%d byte-stable", recovered, n, stable, n));
}

}  // namespace

int main() {
  const auto corpus = make_corpus();
  const std::vector<std::function<void()>> criteria{
      [&] { brenner_recovery(corpus); },
      golden_values,
      isomorphism_completeness,
      [&] { decomposability_agreement(corpus); },
      two_subspace_identities,
      double_triangle_normalization,
      no_finite_pentagon,
      pentagon_margin_law,
      pentagon_split_identities,
      [&] { cli_round_trip(corpus); },
  };
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      std::printf("[FAIL] criterion threw: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
