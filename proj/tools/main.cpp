#include <iostream>

#include "qdiss/cli/commands.hpp"

int main(int argc, char** argv) { return qdiss::cli::run_cli(argc, argv, std::cout, std::cerr); }
