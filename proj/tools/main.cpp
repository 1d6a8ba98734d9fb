#include <string>
#include <vector>

#include "fgig/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return fgig::cli::main_entry(args);
}
