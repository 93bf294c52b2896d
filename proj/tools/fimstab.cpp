#include <iostream>
#include <string>
#include <vector>

#include "fimstab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return fimstab::cli::run(args, std::cout, std::cerr);
}
