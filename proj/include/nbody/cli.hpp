#pragma once

#include <iosfwd>

namespace nbody {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_collision = 2,
    exit_escape = 3,
    exit_not_converged = 4,
};

/// Entry point of orbitctl; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nbody
