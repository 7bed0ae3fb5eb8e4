#pragma once

#include <ostream>

namespace reflbound::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kPrecisionFailure = 2,
  kExpectationMismatch = 3,
};

/// Parses argv and dispatches a subcommand; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reflbound::cli
