#pragma once

#include <iosfwd>
#include <string>

#include "bandshare/scenario.hpp"

namespace bandshare::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Reads and parses a scenario file. Relative registry, mask and PSD paths
/// are resolved against the file's directory.
Scenario load_scenario_file(const std::string& path);

/// Entry point behind the `bandshare` executable. Subcommands: bandplan,
/// power-limit, mask-check, feasibility, rx-report, coverage, radius.
/// Returns 0 on success, 1 on validation failure or bad usage, 2 on I/O failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bandshare::cli
