#include <iostream>

#include "supercalc/cli.hpp"

int main(int argc, char** argv) { return supercalc::cli::main(argc, argv, std::cin, std::cout, std::cerr); }
