#ifndef TRUSTCONS_CLI_HPP
#define TRUSTCONS_CLI_HPP

#include <iosfwd>

namespace trustcons {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIo = 2 };

/// Entry point of the `trustcons` tool. Returns 1 for an invalid or missing
/// configuration and 2 for an I/O failure.
int run_cli(int argc, char** argv);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace trustcons

#endif  // TRUSTCONS_CLI_HPP
