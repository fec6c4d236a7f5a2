#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace backresp {

// Exit statuses of the command-line front end.
inline constexpr int exit_ok = 0;
inline constexpr int exit_refused = 1;
inline constexpr int exit_input_error = 2;

// Runs one invocation. `args` excludes the program name. Results go to `out`,
// diagnostics to `err`. Flags are documented in docs/cli.md.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace backresp
