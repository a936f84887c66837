#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace goom::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Parses `args` (without the program name), runs the subcommand and
/// returns its exit code. CSV goes to `out` unless --out names a file;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace goom::cli
