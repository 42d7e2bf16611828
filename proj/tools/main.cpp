#include <iostream>
#include <string>
#include <vector>

#include "vacuum/cli/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return vacuum::cli::run(args, std::cout, std::cerr);
}
