#pragma once

#include <string>
#include <vector>

namespace demotif::cli {

// Subcommand dispatcher. Exit codes: 0 success, 1 usage error, 2 runtime or
// data error. Diagnostics go to stderr, machine-readable results to stdout.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // without the program name

}  // namespace demotif::cli
