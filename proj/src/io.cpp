#include "relpos/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace relpos {

using nlohmann::json;

Tolerance ToleranceOverrides::apply(Tolerance base) const {
  if (rank_rtol) base.rank_rtol = *rank_rtol;
  if (gap_tol) base.gap_tol = *gap_tol;
  if (residual_tol) base.residual_tol = *residual_tol;
  if (cond_warn) base.cond_warn = *cond_warn;
  if (angle_eps) base.angle_eps = *angle_eps;
  return base;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

Complex parse_entry(const json& e, const std::string& where) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  fail(where, "expected a number or a [re, im] pair");
}

ToleranceOverrides parse_tolerance(const json& t) {
  if (!t.is_object()) fail("tolerance", "expected an object");
  ToleranceOverrides out;
  for (const auto& [key, value] : t.items()) {
    if (!value.is_number()) fail("tolerance." + key, "expected a number");
    const double x = value.get<double>();
    if (key == "rank_rtol") out.rank_rtol = x;
    else if (key == "gap_tol") out.gap_tol = x;
    else if (key == "residual_tol") out.residual_tol = x;
    else if (key == "cond_warn") out.cond_warn = x;
    else if (key == "angle_eps") out.angle_eps = x;
    else fail("tolerance." + key, "unknown tolerance field");
  }
  return out;
}

}  // namespace

SystemFile parse_system(const json& doc, const ToleranceOverrides& forced) {
  if (!doc.is_object()) fail("(root)", "expected an object");
  if (!doc.contains("ambient_dim")) fail("ambient_dim", "missing");
  const json& dim = doc["ambient_dim"];
  if (!dim.is_number_integer() || dim.get<long long>() <= 0) fail("ambient_dim", "expected a positive integer");
  const Index n = dim.get<Index>();

  if (!doc.contains("subspaces")) fail("subspaces", "missing");
  const json& list = doc["subspaces"];
  if (!list.is_array() || list.empty()) fail("subspaces", "expected a non-empty array");

  ToleranceOverrides overrides;
  if (doc.contains("tolerance")) overrides = parse_tolerance(doc["tolerance"]);
  const Tolerance effective = forced.apply(overrides.apply(Tolerance{}));
  try {
    effective.validate();
  } catch (const InvalidArgument& e) {
    fail("tolerance", e.what());
  }

  std::vector<Subspace> parts;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "subspaces[" + std::to_string(i) + "]";
    const json& item = list[i];
    if (!item.is_object()) fail(where, "expected an object");
    if (item.contains("name")) {
      if (!item["name"].is_string()) fail(where + ".name", "expected a string");
      labels.push_back(item["name"].get<std::string>());
    } else {
      labels.push_back("E" + std::to_string(i + 1));
    }
    if (!item.contains("spanning_vectors")) fail(where + ".spanning_vectors", "missing");
    const json& vecs = item["spanning_vectors"];
    if (!vecs.is_array()) fail(where + ".spanning_vectors", "expected an array");
    Matrix cols(n, static_cast<Index>(vecs.size()));
    for (std::size_t j = 0; j < vecs.size(); ++j) {
      const std::string vwhere = where + ".spanning_vectors[" + std::to_string(j) + "]";
      const json& vec = vecs[j];
      if (!vec.is_array() || static_cast<Index>(vec.size()) != n) {
        fail(vwhere, "expected an array of " + std::to_string(n) + " entries");
      }
      for (Index r = 0; r < n; ++r) {
        cols(r, static_cast<Index>(j)) =
            parse_entry(vec[static_cast<std::size_t>(r)], vwhere + "[" + std::to_string(r) + "]");
      }
    }
    try {
      parts.push_back(span(cols, effective));
    } catch (const InvalidArgument& e) {
      fail(where, e.what());
    }
  }
  return SystemFile{SubspaceSystem(n, std::move(parts), std::move(labels)), overrides, effective};
}

SystemFile parse_system_text(std::string_view text, const ToleranceOverrides& forced) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  return parse_system(doc, forced);
}

SystemFile read_system_file(const std::filesystem::path& path, const ToleranceOverrides& forced) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_system_text(buf.str(), forced);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  auto rows = nlohmann::ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::ordered_json system_to_json(const SubspaceSystem& S) {
  nlohmann::ordered_json doc;
  doc["ambient_dim"] = S.ambient_dim();
  auto list = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < S.size(); ++i) {
    nlohmann::ordered_json item;
    item["name"] = S.labels()[i];
    // Basis columns become the spanning vectors.
    item["spanning_vectors"] = matrix_to_json(S[i].basis().transpose());
    list.push_back(std::move(item));
  }
  doc["subspaces"] = std::move(list);
  return doc;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw InputError(path.string() + ": write failed");
}

std::filesystem::path truth_path_for(const std::filesystem::path& system_path) {
  std::filesystem::path p = system_path;
  p.replace_filename(system_path.stem().string() + ".truth.json");
  return p;
}

InvariantVector parse_multiplicities(std::string_view text) {
  InvariantVector v{};
  std::size_t slot = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view field =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (slot >= v.size()) throw InputError("--mult: expected 9 comma-separated integers");
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
      throw InputError("--mult: '" + std::string(field) + "' is not an integer");
    }
    v[slot++] = value;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (slot != v.size()) throw InputError("--mult: expected 9 comma-separated integers, got " + std::to_string(slot));
  try {
    validate_multiplicities(v);
  } catch (const InvalidArgument& e) {
    throw InputError(std::string("--mult: ") + e.what());
  }
  return v;
}

}  // namespace relpos
