#include <iostream>
#include <string>
#include <vector>

#include "logitpath/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return logitpath::cli::run(args, std::cout, std::cerr);
}
