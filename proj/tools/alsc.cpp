#include "alsc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return alsc::cli::main(argc, argv, std::cout, std::cerr); }
