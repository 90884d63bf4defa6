#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace canram
{
    enum ExitCode : int
    {
        exit_success = 0,
        exit_negative = 1,
        exit_usage = 2,
        exit_guard = 3
    };

    // Runs the canram command line. argv[0] is the program name.
    auto run_command(const std::vector<std::string> & argv, std::ostream & out, std::ostream & err) -> int;
}
