#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cgoracle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;

/// Runs the command line `args` (without the program name) and returns the
/// process exit status. `serve` blocks until SIGINT or SIGTERM.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cgoracle::cli
