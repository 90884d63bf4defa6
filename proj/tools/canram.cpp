#include <canram/cli.hpp>

#include <iostream>

auto main(int argc, char * argv[]) -> int
{
    return canram::run_command(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
