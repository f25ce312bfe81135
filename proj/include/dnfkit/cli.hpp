#pragma once

#include <iosfwd>

namespace dnfkit {

enum ExitCode : int { kExitOk = 0, kExitVerificationFailed = 1, kExitUsage = 2 };

/// Entry point of the dnfkit command line tool. JSON goes to `out`, human
/// readable tables and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dnfkit
