#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ucpoint {

enum class ExitStatus : int {
  Success = 0,
  Usage = 1,
  Input = 2,        // unreadable or invalid input files
  Computation = 3,  // non-convergence, singular Jacobian
};

// Entry point of the `ucpoint` tool. args excludes the program name.
// Reports go to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ucpoint
