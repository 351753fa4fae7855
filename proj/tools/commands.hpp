#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracid::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Runs the command line `args` (args[0] is the program name). Human-readable
/// progress goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::string& path);

}  // namespace fracid::cli
