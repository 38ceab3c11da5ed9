#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csov {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_nonconvergence = 3, exit_invariant = 4 };

// Entry point of the command-line tool; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csov
