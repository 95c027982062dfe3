#include <iostream>

#include "guiagent/cli.hpp"

int main(int argc, char** argv) { return guiagent::cli::main(argc, argv, std::cout, std::cerr); }
