#include <iostream>

#include "copekit/cli.hpp"

int main(int argc, char** argv) { return copekit::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
