#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigbound::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kInputError = 2,
    kUnargmaxableFound = 3,  // verify only
    kIndeterminateFound = 4, // verify only
};

/// Runs the command line `args` (args[0] is the program name). Reports go
/// to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sigbound::cli
