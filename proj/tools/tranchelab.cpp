#include <iostream>
#include <string>
#include <vector>

#include "tranchelab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return tranchelab::run_cli(args, std::cout, std::cerr);
}
