#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vbisnr::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvalidInput = 1,
    kExitIoFailure = 2,
    kExitNotMeasurable = 3,
};

/// Runs the command line `args` (args[0] is the program name). Machine
/// output goes to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vbisnr::cli
