#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fjmgt::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kSolverError = 3,
};

/// Entry point of the fjmgt tool. Commands: solve, limit, sweep, kernel-check,
/// selftest. Messages go to `out` and `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace fjmgt::cli
