#include "relpos/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "relpos/catalog.hpp"
#include "relpos/pentagon.hpp"

namespace relpos {

using ojson = nlohmann::ordered_json;

std::string format_residual(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double round_angle(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace {

template <class Body>
CommandResult guarded(const char* name, Body&& body) {
  auto failure = [&](const std::string& message, int code) {
    CommandResult r;
    r.report["command"] = name;
    r.report["error"] = message;
    r.exit_code = code;
    return r;
  };
  try {
    return body();
  } catch (const PreconditionFailure& e) {
    CommandResult r = failure(e.what(), kExitInputError);
    r.report["hypothesis"] = e.hypothesis();
    return r;
  } catch (const ConditioningFailure& e) {
    return failure(e.what(), kExitVerificationFailed);
  } catch (const Error& e) {
    return failure(e.what(), kExitInputError);
  } catch (const std::filesystem::filesystem_error& e) {
    return failure(e.what(), kExitInputError);
  }
}

ojson tolerance_json(const Tolerance& t) {
  ojson j;
  j["rank_rtol"] = t.rank_rtol;
  j["gap_tol"] = t.gap_tol;
  j["residual_tol"] = t.residual_tol;
  j["cond_warn"] = t.cond_warn;
  j["angle_eps"] = t.angle_eps;
  return j;
}

ojson invariants_json(const InvariantVector& v) {
  ojson j;
  for (std::size_t i = 0; i < v.size(); ++i) j[std::string(kBlockNames[i])] = v[i];
  return j;
}

ojson angles_json(const std::vector<double>& angles) {
  ojson a = ojson::array();
  for (double t : angles) a.push_back(round_angle(t));
  return a;
}

ojson residuals_json(const auto& values) {
  ojson a = ojson::array();
  for (double x : values) a.push_back(format_residual(x));
  return a;
}

void require_arity(const SubspaceSystem& S, std::size_t k, const std::filesystem::path& file) {
  if (S.size() != k) {
    throw InvalidArgument(file.string() + ": expected " + std::to_string(k) + " subspaces, got " +
                          std::to_string(S.size()));
  }
}

ojson system_header(const std::filesystem::path& file, const SubspaceSystem& S) {
  ojson j;
  j["file"] = file.string();
  j["ambient_dim"] = S.ambient_dim();
  ojson subs = ojson::array();
  for (std::size_t i = 0; i < S.size(); ++i) {
    ojson s;
    s["name"] = S.labels()[i];
    s["dim"] = S[i].dim();
    subs.push_back(std::move(s));
  }
  j["subspaces"] = std::move(subs);
  return j;
}

}  // namespace

CommandResult cmd_analyze(const std::filesystem::path& file, const CommandOptions& opts) {
  return guarded("analyze", [&] {
    const SystemFile in = read_system_file(file, opts.tolerance);
    const SubspaceSystem& S = in.system;
    const Tolerance& tol = in.tolerance;
    Diagnostics diag;

    CommandResult r;
    ojson& rep = r.report;
    rep["command"] = "analyze";
    rep.update(system_header(file, S));
    rep["seed"] = opts.seed;
    rep["tolerance"] = tolerance_json(tol);

    const HomBasis ends = hom_basis(S, S, tol, &diag);
    rep["end_dim"] = ends.dim();
    rep["commutative"] = is_commutative(S, tol);
    rep["transitive"] = ends.dim() == 1;
    const auto witness = find_nontrivial_idempotent(S, ends, tol, {8, opts.seed, 1e-6});
    rep["decomposable"] = witness.has_value();
    if (witness) {
      rep["idempotent_rank"] = witness->range.dim();
    } else {
      rep["idempotent_rank"] = nullptr;
    }
    if (S.size() == 3) {
      rep["double_triangle"] = detect_double_triangle(S, tol);
      rep["pentagon"] = detect_pentagon(S, tol);
    } else {
      diag.warn("double_triangle and pentagon need exactly 3 subspaces; skipped");
    }

    ojson pairs = ojson::array();
    for (std::size_t i = 0; i < S.size(); ++i) {
      for (std::size_t j = i + 1; j < S.size(); ++j) {
        ojson p;
        p["pair"] = {S.labels()[i], S.labels()[j]};
        p["angles"] = (S[i].is_zero() || S[j].is_zero()) ? ojson::array()
                                                          : angles_json(principal_angles(S[i], S[j]));
        pairs.push_back(std::move(p));
      }
    }
    rep["principal_angles"] = std::move(pairs);
    rep["warnings"] = diag.warnings;
    return r;
  });
}

CommandResult cmd_decompose(const std::filesystem::path& file, const CommandOptions& opts) {
  return guarded("decompose", [&] {
    const SystemFile in = read_system_file(file, opts.tolerance);
    const SubspaceSystem& S = in.system;
    require_arity(S, 3, file);
    const Tolerance& tol = in.tolerance;

    const BrennerDecomposition d = brenner_decompose(S, tol);
    const BrennerReport check = verify_brenner(S, d, tol);

    CommandResult r;
    ojson& rep = r.report;
    rep["command"] = "decompose";
    rep.update(system_header(file, S));
    rep["tolerance"] = tolerance_json(tol);
    rep["invariants"] = invariants_json(d.invariants());
    rep["invariant_vector"] = d.invariants();
    rep["residual"] = format_residual(check.residual);
    ojson v;
    v["subspace_gaps"] = residuals_json(check.subspace_gaps);
    v["triangle_gaps"] = residuals_json(check.triangle_gaps);
    v["triangle_meets_zero"] = check.triangle_meets_zero;
    v["independent"] = check.independent;
    v["spanning_deficit"] = check.spanning_deficit;
    if (check.normal_form_gap) v["normal_form_gap"] = format_residual(*check.normal_form_gap);
    rep["verification"] = std::move(v);
    if (d.sum_operator_sigma_min) {
      rep["sum_operator_sigma_min"] = format_residual(*d.sum_operator_sigma_min);
    } else {
      rep["sum_operator_sigma_min"] = nullptr;
    }
    rep["trusted"] = d.trusted;
    rep["warnings"] = d.warnings;
    rep["passes"] = check.passes;
    if (opts.emit_basis) rep["change_of_basis"] = matrix_to_json(d.change_of_basis);
    r.exit_code = check.passes ? kExitOk : kExitVerificationFailed;
    return r;
  });
}

CommandResult cmd_isomorphic(const std::filesystem::path& first, const std::filesystem::path& second,
                             const CommandOptions& opts) {
  return guarded("isomorphic", [&] {
    const SystemFile a = read_system_file(first, opts.tolerance);
    const SystemFile b = read_system_file(second, opts.tolerance);
    require_arity(a.system, 3, first);
    require_arity(b.system, 3, second);
    if (a.system.ambient_dim() != b.system.ambient_dim()) {
      throw DimensionMismatch("ambient dimensions differ: " + std::to_string(a.system.ambient_dim()) +
                              " vs " + std::to_string(b.system.ambient_dim()));
    }
    const Tolerance& tol = a.tolerance;
    const IsomorphismDecision dec = is_isomorphic_three(a.system, b.system, tol);

    CommandResult r;
    ojson& rep = r.report;
    rep["command"] = "isomorphic";
    rep["files"] = {first.string(), second.string()};
    rep["ambient_dim"] = a.system.ambient_dim();
    rep["tolerance"] = tolerance_json(tol);
    rep["isomorphic"] = dec.isomorphic;
    rep["invariants"] = {invariants_json(dec.first), invariants_json(dec.second)};
    if (dec.report) {
      ojson v;
      v["gaps"] = residuals_json(dec.report->gaps);
      v["max_gap"] = format_residual(dec.report->max_gap);
      v["condition"] = format_residual(dec.report->condition);
      v["passes"] = dec.report->passes;
      rep["verification"] = std::move(v);
      if (!dec.report->passes) r.exit_code = kExitVerificationFailed;
    }
    if (opts.emit_map && dec.map) rep["map"] = matrix_to_json(*dec.map);
    return r;
  });
}

CommandResult cmd_generate(const InvariantVector& multiplicities, std::uint64_t seed, double cond,
                           const std::filesystem::path& out, const CommandOptions&) {
  return guarded("generate", [&] {
    validate_multiplicities(multiplicities);
    const ComposedSystem c = compose_from_multiplicities(multiplicities, seed, cond);
    const std::filesystem::path truth = truth_path_for(out);
    write_json_file(out, system_to_json(c.system));

    ojson t;
    t["multiplicities"] = invariants_json(multiplicities);
    t["vector"] = multiplicities;
    t["seed"] = seed;
    t["cond"] = cond;
    write_json_file(truth, t);

    CommandResult r;
    r.report["command"] = "generate";
    r.report["file"] = out.string();
    r.report["truth_file"] = truth.string();
    r.report["ambient_dim"] = c.system.ambient_dim();
    r.report["vector"] = multiplicities;
    r.report["seed"] = seed;
    r.report["cond"] = cond;
    return r;
  });
}

CommandResult cmd_pentagon(const std::filesystem::path& file, const CommandOptions& opts) {
  return guarded("pentagon", [&] {
    const SystemFile in = read_system_file(file, opts.tolerance);
    const SubspaceSystem& S = in.system;
    require_arity(S, 3, file);
    const Tolerance& tol = in.tolerance;
    const PentagonSplit p = pentagon_split(S, tol);

    CommandResult r;
    ojson& rep = r.report;
    rep["command"] = "pentagon";
    rep.update(system_header(file, S));
    rep["case"] = to_string(p.kind);
    ojson dims;
    dims["N2"] = p.n2.dim();
    dims["F3"] = p.f3.dim();
    if (p.kind == PentagonCase::within_sum) {
      dims["N1"] = p.n1->dim();
      dims["M1"] = p.m1->dim();
    } else {
      dims["E1'"] = p.e1_reduced.dim();
      dims["E2'"] = S[1].dim();
      dims["E3'"] = p.e3_reduced.dim();
    }
    rep["dims"] = std::move(dims);
    rep["witness_count"] = p.u.cols();
    rep["independent"] = p.independent;
    rep["identity_residual"] = format_residual(p.identity_residual);

    ojson margins = ojson::array();
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        ojson m;
        m["pair"] = {S.labels()[i], S.labels()[j]};
        try {
          m["margin"] = round_angle(closedness_margin(S[i], S[j], tol).min_positive_angle);
        } catch (const PreconditionFailure&) {
          m["margin"] = nullptr;
        }
        margins.push_back(std::move(m));
      }
    }
    rep["closedness_margins"] = std::move(margins);
    const bool ok = p.independent && p.identity_residual <= tol.residual_tol;
    rep["passes"] = ok;
    r.exit_code = ok ? kExitOk : kExitVerificationFailed;
    return r;
  });
}

CommandResult cmd_pentagon_example9(Index n, const CommandOptions& opts) {
  return guarded("pentagon", [&] {
    if (n < 2) throw InvalidArgument("--example9: n must be at least 2");
    const Tolerance tol = opts.tolerance.apply(Tolerance{});
    tol.validate();

    CommandResult r;
    ojson& rep = r.report;
    rep["command"] = "pentagon";
    rep["example9"] = n;

    std::vector<Index> sizes;
    for (Index m = 2; m < n; m *= 2) sizes.push_back(m);
    sizes.push_back(n);
    ojson table = ojson::array();
    for (Index m : sizes) {
      const double margin = diagonal_graph_margin(m, tol).min_positive_angle;
      const double expected = std::atan(1.0 / static_cast<double>(m));
      ojson row;
      row["n"] = m;
      row["margin"] = round_angle(margin);
      row["arctan_inverse_n"] = round_angle(expected);
      row["deviation"] = format_residual(std::abs(margin - expected));
      table.push_back(std::move(row));
    }
    rep["margins"] = std::move(table);

    const SubspaceSystem sys = example9_truncated(n);
    rep["dims"] = sys.dims();
    rep["pentagon"] = detect_pentagon(sys, tol);
    return r;
  });
}

namespace {

void render(std::ostringstream& os, const ojson& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  auto scalar_like = [](const ojson& v) {
    if (!v.is_structured()) return true;
    if (!v.is_array()) return false;
    for (const auto& e : v)
      if (e.is_object()) return false;
    return true;
  };
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (scalar_like(value)) {
        os << pad << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
      } else {
        os << pad << key << ":\n";
        render(os, value, depth + 1);
      }
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      os << pad << "-\n";
      render(os, e, depth + 1);
    }
  } else {
    os << pad << j.dump() << '\n';
  }
}

}  // namespace

std::string render_text(const ojson& report) {
  std::ostringstream os;
  render(os, report, 0);
  return os.str();
}

}  // namespace relpos
