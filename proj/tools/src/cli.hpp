#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hodgelab::cli {

enum ExitCode : int { kPass = 0, kFail = 2, kNumerical = 3, kExploratory = 4 };

/// Runs one command line (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hodgelab::cli
