#include <iostream>

#include "backresp/cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return backresp::run_cli(args, std::cout, std::cerr);
}
