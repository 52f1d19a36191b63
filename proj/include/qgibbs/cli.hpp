#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qgibbs {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariantFailure = 1;
inline constexpr int kExitUsage = 2;

/// Subcommands: spectrum, verify, compile, sample, compare. Reports go to
/// `out` (or --out), errors to `err` as a JSON object.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgibbs
