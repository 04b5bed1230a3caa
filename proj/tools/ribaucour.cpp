#include <iostream>

#include "ribaucour/cli.hpp"

int main(int argc, char** argv) { return ribaucour::cli::main(argc, argv, std::cout, std::cerr); }
