#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddgeo::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kInfeasible = 1,
    kUsage = 2,
    kInternal = 3,
};

/// Runs one command line (without the program name). Documents go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ddgeo::cli
