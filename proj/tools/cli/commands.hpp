#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace phasegrating::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numeric = 3, exit_validity = 4 };

// Entry point behind the `phasegrating` executable; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phasegrating::cli
