// relpos: decompositions of systems of subspaces from the command line.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "relpos/commands.hpp"

namespace {

struct GlobalFlags {
  std::optional<double> rank_rtol;
  std::optional<double> gap_tol;
  std::optional<double> residual_tol;
  std::uint64_t seed = 0;
  bool text = false;
};

int emit(const relpos::CommandResult& r, bool text) {
  if (text) {
    std::cout << relpos::render_text(r.report);
  } else {
    std::cout << r.report.dump(2) << '\n';
  }
  if (r.report.contains("error")) std::cerr << "relpos: " << r.report["error"].get<std::string>() << '\n';
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical decompositions of systems of subspaces of C^n"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--rank-rtol", g.rank_rtol, "Relative singular-value cutoff for rank decisions")
      ->envname("RELPOS_RANK_RTOL");
  app.add_option("--gap-tol", g.gap_tol, "Gap below which subspaces count as equal")
      ->envname("RELPOS_GAP_TOL");
  app.add_option("--residual-tol", g.residual_tol, "Verification threshold")
      ->envname("RELPOS_RESIDUAL_TOL");
  app.add_option("--seed", g.seed, "Seed for randomized procedures")->envname("RELPOS_SEED");
  auto* json_flag = app.add_flag("--json", "JSON output (default)");
  app.add_flag("--text", g.text, "Indented text output")->excludes(json_flag);

  std::string file, file_b, out_path, mult;
  double cond = 10.0;
  bool emit_basis = false, emit_map = false;
  std::optional<long long> example9;

  auto* analyze = app.add_subcommand("analyze", "Predicates, endomorphisms and principal angles");
  analyze->add_option("FILE", file, "System file")->required();

  auto* decompose = app.add_subcommand("decompose", "Nine-block decomposition of a 3-system");
  decompose->add_option("FILE", file, "System file")->required();
  decompose->add_flag("--emit-basis", emit_basis, "Include the change-of-basis matrix");

  auto* isomorphic = app.add_subcommand("isomorphic", "Decide isomorphism of two 3-systems");
  isomorphic->add_option("A", file, "First system file")->required();
  isomorphic->add_option("B", file_b, "Second system file")->required();
  isomorphic->add_flag("--emit-map", emit_map, "Include the explicit isomorphism");

  auto* generate = app.add_subcommand("generate", "Write a scrambled system with known invariants");
  generate->add_option("--mult", mult, "s,n1,n2,n3,m1,m2,m3,k,l")->required();
  generate->add_option("--cond", cond, "Condition number of the scramble")->check(CLI::Range(1.0, 1e12));
  generate->add_option("-o,--output", out_path, "Output system file")->required();

  auto* pentagon = app.add_subcommand("pentagon", "Pentagon split and closedness margins");
  auto* pfile = pentagon->add_option("FILE", file, "System file");
  auto* pex = pentagon->add_option("--example9", example9, "Truncation size for the diagonal example");
  pfile->excludes(pex);
  pentagon->require_option(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? relpos::kExitOk : relpos::kExitInputError;
  }

  relpos::CommandOptions opts;
  opts.tolerance.rank_rtol = g.rank_rtol;
  opts.tolerance.gap_tol = g.gap_tol;
  opts.tolerance.residual_tol = g.residual_tol;
  opts.seed = g.seed;
  opts.emit_basis = emit_basis;
  opts.emit_map = emit_map;

  if (*analyze) return emit(relpos::cmd_analyze(file, opts), g.text);
  if (*decompose) return emit(relpos::cmd_decompose(file, opts), g.text);
  if (*isomorphic) return emit(relpos::cmd_isomorphic(file, file_b, opts), g.text);
  if (*generate) {
    relpos::InvariantVector v;
    try {
      v = relpos::parse_multiplicities(mult);
    } catch (const relpos::InputError& e) {
      std::cerr << "relpos: " << e.what() << '\n';
      return relpos::kExitInputError;
    }
    return emit(relpos::cmd_generate(v, g.seed, cond, out_path, opts), g.text);
  }
  if (example9) return emit(relpos::cmd_pentagon_example9(static_cast<relpos::Index>(*example9), opts), g.text);
  return emit(relpos::cmd_pentagon(file, opts), g.text);
}
