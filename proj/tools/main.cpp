#include <iostream>

#include "jointradius/cli.hpp"

int main(int argc, char** argv) { return jointradius::run_cli(argc, argv, std::cout, std::cerr); }
