#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hfm::cli {

/// Runs the command line with argv-style arguments (args[0] is the program name).
/// Returns the process exit code; diagnostics go to `err`, progress lines to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hfm::cli
