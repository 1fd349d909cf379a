#pragma once

// JSON system files.
//
//   {
//     "ambient_dim": 3,
//     "subspaces": [
//       {"name": "E1", "spanning_vectors": [[1, 0, [0, 1]], ...]},
//       ...
//     ],
//     "tolerance": {"rank_rtol": 1e-10}
//   }
//
// Entries are bare reals or [re, im] pairs. Spanning vectors need not be
// independent; each subspace is their span.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "relpos/brenner.hpp"
#include "relpos/systems.hpp"

namespace relpos {

/// Malformed input: bad JSON, missing fields, wrong shapes, I/O failure.
/// The message names the offending field path.
class InputError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct ToleranceOverrides {
  std::optional<double> rank_rtol;
  std::optional<double> gap_tol;
  std::optional<double> residual_tol;
  std::optional<double> cond_warn;
  std::optional<double> angle_eps;

  /// base with every present field replaced.
  Tolerance apply(Tolerance base) const;
};

struct SystemFile {
  SubspaceSystem system;
  ToleranceOverrides file_tolerance;  // the file's own "tolerance" block
  Tolerance tolerance;                // defaults < file block < forced
};

/// `forced` (typically command-line flags) overrides the file's block.
SystemFile parse_system(const nlohmann::json& doc, const ToleranceOverrides& forced = {});
SystemFile parse_system_text(std::string_view text, const ToleranceOverrides& forced = {});
SystemFile read_system_file(const std::filesystem::path& path, const ToleranceOverrides& forced = {});

/// Writes the orthonormal bases as spanning vectors, full precision.
nlohmann::ordered_json system_to_json(const SubspaceSystem& S);
void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

/// [[re, im], ...] rows.
nlohmann::ordered_json matrix_to_json(const Matrix& m);

/// `<stem>.truth.json` next to a generated system file.
std::filesystem::path truth_path_for(const std::filesystem::path& system_path);

/// Parses "s,n1,n2,n3,m1,m2,m3,k,l".
InvariantVector parse_multiplicities(std::string_view text);

}  // namespace relpos
