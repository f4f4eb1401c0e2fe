#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sarfocus {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitCriterion = 4,
};

/// Runs the `sarfocus` command line. `args` excludes the program name.
/// Results go to `out`, diagnostics and progress to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sarfocus
