#include <iostream>

#include "tiertune/harness.hpp"

int main(int argc, char** argv) { return tiertune::harness::run_cli(argc, argv, std::cout, std::cerr); }
