#include <iostream>

#include "compactfd/commands.hpp"

int main(int argc, char** argv) { return compactfd::cli_main(argc, argv, std::cout, std::cerr); }
