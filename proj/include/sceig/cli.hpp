#pragma once

#include <string>
#include <vector>

namespace sceig {

/// Exit status: 0 success, 1 solver did not converge (or a golden check
/// failed), 2 input or usage error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace sceig
