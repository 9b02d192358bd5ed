#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ionpar {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumeric = 2, kExitIo = 3 };

/// Runs one command line (without the program name). Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ionpar
