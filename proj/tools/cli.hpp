#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace exittime::cli {

// Exit codes
inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_parse = 2;
inline constexpr int exit_outside = 3;
inline constexpr int exit_truncation = 4;
inline constexpr int exit_unsupported = 5;

//! Run the command line `args` (without the program name).
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace exittime::cli
