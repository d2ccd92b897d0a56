#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bgf::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kRuntimeError = 2;

// Runs one invocation. args excludes the program name. Reports go to out,
// diagnostics and usage text to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bgf::cli
