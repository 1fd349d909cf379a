#pragma once

// Report builders behind the command-line tool. Each returns the JSON report
// and the process exit code, so they can be driven without a process.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "relpos/io.hpp"

namespace relpos {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInputError = 2,
};

struct CommandOptions {
  /// Flag or environment overrides; they win over a file's own tolerance block.
  ToleranceOverrides tolerance;
  std::uint64_t seed = 0;
  bool emit_basis = false;
  bool emit_map = false;
};

struct CommandResult {
  nlohmann::ordered_json report;
  int exit_code = kExitOk;
};

CommandResult cmd_analyze(const std::filesystem::path& file, const CommandOptions& opts);
CommandResult cmd_decompose(const std::filesystem::path& file, const CommandOptions& opts);
CommandResult cmd_isomorphic(const std::filesystem::path& first, const std::filesystem::path& second,
                             const CommandOptions& opts);
/// Writes the system file and its `<stem>.truth.json` sidecar.
CommandResult cmd_generate(const InvariantVector& multiplicities, std::uint64_t seed, double cond,
                           const std::filesystem::path& out, const CommandOptions& opts);
CommandResult cmd_pentagon(const std::filesystem::path& file, const CommandOptions& opts);
/// Margin-versus-truncation table for the diagonal-operator pentagon example.
CommandResult cmd_pentagon_example9(Index n, const CommandOptions& opts);

/// Residual formatting used in reports: 3 significant digits, e.g. "1.23e-15".
std::string format_residual(double x);
/// Angles are rounded to 12 significant digits so reports are platform-stable.
double round_angle(double x);

/// Indented "key: value" rendering of a report.
std::string render_text(const nlohmann::ordered_json& report);

}  // namespace relpos
