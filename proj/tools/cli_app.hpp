#pragma once

#include <string>
#include <vector>

namespace fconv {

/// Runs the command-line tool on argv-style arguments (program name not
/// included, natural order). Exit status: 0 success, 1 usage or validation
/// error, 2 verification violations, 3 non-convergence.
int run_cli(std::vector<std::string> args);

}  // namespace fconv
