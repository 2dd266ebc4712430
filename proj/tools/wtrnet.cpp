#include <iostream>
#include <string>
#include <vector>

#include "wtrnet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wtrnet::cli::run(args, std::cout, std::cerr);
}
