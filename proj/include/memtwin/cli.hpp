#pragma once
// Command-line front end: registry inspection and experiment execution with
// CSV/JSON emission plus a reproducibility manifest per run.

#include <iosfwd>
#include <string>
#include <vector>

namespace memtwin {

inline constexpr char kToolVersion[] = "1.0.0";

// Runs the tool on `args` (program name excluded).  Returns the process exit
// code: 0 success, 1 internal error, 2 configuration/compatibility error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace memtwin
