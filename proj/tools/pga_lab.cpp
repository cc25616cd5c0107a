#include <iostream>

#include "pga/cli.hpp"

int main(int argc, char** argv) { return pga::run_cli(argc, argv, std::cout, std::cerr); }
