#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gp::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kBudget = 3,
  kNumeric = 4,
  kIo = 5,
};

// Runs one gperiods invocation. args excludes the program name. Normal
// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gp::cli
