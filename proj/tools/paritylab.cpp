#include <iostream>

#include "paritylab/cli.hpp"

int main(int argc, char** argv) { return paritylab::run_cli(argc, argv, std::cout, std::cerr); }
