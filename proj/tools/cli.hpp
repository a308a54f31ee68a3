#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conereg::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kUsageError = 2 };

/// Runs the tool on `args` (without the program name); output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace conereg::cli
