#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linbandit/harness.hpp"

namespace linbandit {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitInput = 4,
  kExitNumerical = 5,
};

/// Malformed command line: unknown flag, missing or unparsable value.
struct UsageError : Error {
  using Error::Error;
};

struct CliOptions {
  SimulationConfig config;
  std::string out_dir = ".";
  /// When set, fit both reward forms on t <= fit_split and write fit.json.
  std::optional<Index> fit_split;
  bool help = false;

  bool operator==(const CliOptions&) const = default;
};

/// Seed and settings of the `paper-figure` preset: p = 30, Delta = 1, 5000 realizations.
SimulationConfig paper_figure_preset();

/// Parses arguments (without the program name). Throws UsageError or ConfigError.
CliOptions parse_args(const std::vector<std::string>& args);

/// Argument list that parses back to `options`.
std::vector<std::string> render_args(const CliOptions& options);

std::string usage_text();

/// Runs the experiment and writes trajectory.csv, metadata.json and
/// manifest.json (plus diagnostics.json / fit.json when requested) into the
/// output directory. Returns an exit code; on failure prints one line to `err`
/// and removes any file it already wrote.
int run(const CliOptions& options, std::string& err);

/// parse_args + run with exit-code mapping.
int main_entry(const std::vector<std::string>& args);

}  // namespace linbandit
