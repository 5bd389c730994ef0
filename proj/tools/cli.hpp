#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace datalimit::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // I/O failure or a failed validation check
  kInvalidInput = 2,
  kNonConvergence = 3,
  kInfeasible = 4,
};

/// Runs one command. `args` excludes the program name. Data goes to `out`,
/// diagnostics and provenance to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace datalimit::cli
