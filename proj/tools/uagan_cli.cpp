#include <iostream>
#include <string>
#include <vector>

#include "uagan/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return uagan::cli_dispatch(args, std::cout, std::cerr);
}
