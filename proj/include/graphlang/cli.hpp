#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace graphlang {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the graphlang command line. `args` excludes the program name. Data
/// written to the path "-" goes to `out`; logs and diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphlang
