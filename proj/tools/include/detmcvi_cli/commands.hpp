#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace detmcvi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBudgetExhausted = 2;
inline constexpr int kExitUsage = 64;

/// Runs the command line `args` (without the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the process exit code.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace detmcvi::cli
