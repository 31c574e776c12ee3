#pragma once

#include <string>

#include "linbandit/harness.hpp"

namespace linbandit {

/// Header line of the trajectory CSV.
extern const char* const kTrajectoryCsvHeader;

/// Trajectory CSV text. `bounds` may be null, in which case bound columns hold nan.
/// Numbers are printed with 17 significant digits so equal runs give equal bytes.
std::string trajectory_csv(const TrajectorySummary& summary, const BoundCurves* bounds);

std::string sha256_hex(const std::string& bytes);
std::string sha1_hex(const std::string& bytes);

/// Writes `contents` to `path`, throwing ConfigError if the file cannot be written.
void write_file(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

}  // namespace linbandit
