#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sra::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;       // bad flags, unreadable or invalid input
inline constexpr int kExitDegenerate = 3;  // data cannot support the computation

/// Runs one subcommand (evaluate, sweep, simulate, gen). `args` excludes
/// the program name. Reports go to `out` unless --output names a file;
/// diagnostics always go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sra::cli
