#include <iostream>
#include <string>
#include <vector>

#include "fkummer/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fk::run(args, std::cout, std::cerr);
}
