#pragma once

// Batch front-end: parses flags and the TOML config, runs one subcommand
// and writes its result files plus manifest.json into the output directory.

#include <iosfwd>
#include <string>
#include <vector>

namespace hypwave {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// `args` excludes the program name. On failure one JSON object
/// {"error": kind, "message": text} is written to `err`. The manifest of
/// the written files goes to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypwave
