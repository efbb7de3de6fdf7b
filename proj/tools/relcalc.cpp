#include <iostream>

#include "relcalc/cli.hpp"

int main(int argc, char** argv) { return relcalc::run_cli(argc, argv, std::cout, std::cerr); }
