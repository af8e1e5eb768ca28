// cli.hpp -- the qbound command-line front end as a callable library.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbound::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,
    kUsage = 2,
    kRuntimeError = 3,
};

/// Parses `args` (without the program name), runs the subcommand and writes
/// the JSON report to `out` and a one-line summary to `err`. `in` backs the
/// "-" input path.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace qbound::cli
