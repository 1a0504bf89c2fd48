#pragma once

#include <iosfwd>

namespace condensate::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitSolverFailure = 1,
  kExitConfigInvalid = 2,
  kExitVerdictFailure = 3,
};

/// Entry point of condensate-lab. Results go to `out` (or --output), errors
/// to `err` as one JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace condensate::cli
