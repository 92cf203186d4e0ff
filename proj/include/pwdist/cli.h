// Command-line front end: ingest, fit, stats, curve, crack, mh-sim.

#ifndef PWDIST_CLI_H_
#define PWDIST_CLI_H_

#include <ostream>

namespace pwdist {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

// Runs one subcommand. Diagnostics go to `err` as tab-separated
// `error\t<kind>\t<message>` (or `warning\t...`) lines.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pwdist

#endif  // PWDIST_CLI_H_
