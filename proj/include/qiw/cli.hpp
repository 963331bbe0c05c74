#pragma once

#include <iosfwd>

namespace qiw::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitNoNegativeEigenvalue = 3,
  kExitDimensionMismatch = 4,
  kExitBoundViolation = 5,
};

// Entry point of the `qiw` tool: build | eval | attack. Reports go to `out`,
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qiw::cli
