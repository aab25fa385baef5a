#pragma once

#include <iosfwd>

namespace sarframe {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitIo = 3, kExitData = 4 };

/// Entry point of the sarframe command-line tool. Never throws; every failure
/// is reported on err and mapped to an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sarframe
