#include <iostream>

#include "dnfkit/cli.hpp"

int main(int argc, char** argv) { return dnfkit::run_cli(argc, argv, std::cout, std::cerr); }
