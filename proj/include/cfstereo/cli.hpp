#pragma once

#include <iosfwd>

namespace cfstereo {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Entry point of the `cfstereo` tool with subcommands match, eval, synth
/// and rank. Results go to `out` as key=value lines, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cfstereo
