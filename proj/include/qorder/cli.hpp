#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qorder::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kNegative = 2, kIndeterminate = 3 };

/// Runs one command. `args` excludes the program name. Reports go to --out or to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qorder::cli
