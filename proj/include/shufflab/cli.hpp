#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shufflab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,      ///< runtime error, or a certificate that did not verify
  kExitUsage = 2,        ///< bad flags or invalid parameters
  kExitBudget = 3,       ///< exact search outside its limits
};

/// Runs one command. `args` excludes the program name. Results go to `out`
/// and to files under --out; failures print one JSON error record to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shufflab
