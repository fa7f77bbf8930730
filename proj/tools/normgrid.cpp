#include <iostream>

#include "normgrid/cli.hpp"

int main(int argc, char** argv) { return normgrid::run_cli(argc, argv, std::cout, std::cerr); }
