#pragma once

#include <ostream>

#include "jointradius/error.hpp"

namespace jointradius {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitParse = 2,
    kExitUnsupportedExact = 3,
    kExitDimension = 4,
    kExitIo = 5,
};

int exit_code_for(ErrorCode code);

/// Runs the CLI with JSON results on `out` and diagnostics on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jointradius
