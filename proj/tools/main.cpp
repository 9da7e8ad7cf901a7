#include <iostream>

#include "lab/cli.hpp"

int main(int argc, char** argv) { return rovella::lab::run_cli(argc, argv, std::cout, std::cerr); }
