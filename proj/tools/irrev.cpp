#include "irrev/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return irrev::cli::run(argc, argv, std::cout, std::cerr); }
