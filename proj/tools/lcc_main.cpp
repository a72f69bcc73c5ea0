#include <string>
#include <vector>

#include "lcc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lcc::cli::run(args);
}
