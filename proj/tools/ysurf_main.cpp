#include <iostream>

#include "ysurf/cli.hpp"

int main(int argc, char** argv) { return ysurf::run_cli(argc, argv, std::cout, std::cerr); }
