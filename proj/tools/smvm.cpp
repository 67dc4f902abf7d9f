#include <iostream>
#include <string>
#include <vector>

#include "smvm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return smvm::cliMain(args, std::cout, std::cerr);
}
