#include <iostream>

#include "latticeweave/cli.hpp"

int main(int argc, char** argv) {
    return latticeweave::run_cli(argc, argv, std::cout, std::cerr);
}
