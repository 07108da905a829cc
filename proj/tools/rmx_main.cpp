#include <iostream>

#include "rmx/cli.hpp"

int main(int argc, char** argv) { return rmx::cli::main_entry(argc, argv, std::cout, std::cerr); }
