#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace misosud {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,     // bad flags, bad config, infeasible or out-of-hypothesis input
  kExitNumerical = 2,  // numerical failure (including degenerate zero forcing)
  kExitVerify = 3,     // a verification suite ran and failed
};

// args excludes the program name. Files named by --out are written; without
// --out results go to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace misosud
