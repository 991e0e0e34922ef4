#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdlcomp {

/// Exit statuses of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitNumeric = 2 };

/// Runs one subcommand. args excludes the program name. Data goes to `out`
/// (or to files under --out), diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_command(int argc, char** argv);

}  // namespace mdlcomp
