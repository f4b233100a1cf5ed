#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cleanwords::cli {

inline constexpr const char* kVersion = "1.0.0";

// Runs the command line with the given arguments (argv[0] excluded) and
// returns the process exit code: 0 success, 1 invalid usage or
// configuration, 2 failure while running.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cleanwords::cli
