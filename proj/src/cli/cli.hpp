#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iwf::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kUsageError = 1,  // bad flags, unreadable or unwritable files
  kInvalidInput = 2,
  kJudgeIncomplete = 3,
};

/// Runs one command line (without the program name). Primary output goes
/// to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iwf::cli
