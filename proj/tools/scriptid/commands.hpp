#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scriptid::app {

/// Runs the `scriptid` command line. `args` excludes the program name.
/// Normal output goes to `out`, diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scriptid::app
