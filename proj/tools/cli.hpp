#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsvar::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kUnexpected = 1,
    kInputError = 2,
    kShapeMismatch = 3,
    kSolverFailure = 4,
    kCheckFailure = 5,
};

/// Runs the command line `args` (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tsvar::cli
