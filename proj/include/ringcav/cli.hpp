#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ringcav::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalError = 2 };

/// Runs one command line. `args` excludes the program name. Data goes to
/// `out` (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker cap from RINGCAV_THREADS; 0 (hardware concurrency) when unset.
/// Throws InvalidParameter on a malformed value.
unsigned thread_limit_from_env();

}  // namespace ringcav::cli
