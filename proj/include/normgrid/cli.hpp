#pragma once

#include <ostream>

namespace normgrid {

/// Exit statuses of the command-line front end.
enum ExitStatus : int { kExitOk = 0, kExitArgument = 2, kExitNumerical = 3 };

/// Runs one `normgrid <subcommand> [flags]` invocation. Without --out the
/// JSON/CSV body goes to `out` and the one-line summary to `err`; with --out
/// the body is written to that file and the summary goes to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace normgrid
