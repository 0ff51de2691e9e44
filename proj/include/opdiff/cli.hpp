#pragma once

#include <iostream>

namespace opdiff {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,     // bad flags, unparsable expression, theorem/operator mismatch
  kExitDomain = 3,    // evaluation outside the function's domain
  kExitViolated = 4,  // verify found lhs > rhs
};

int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace opdiff
