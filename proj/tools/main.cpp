#include <iostream>

#include "cfstereo/cli.hpp"

int main(int argc, char** argv) { return cfstereo::cli_main(argc, argv, std::cout, std::cerr); }
