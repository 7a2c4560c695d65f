#include <iostream>

#include "epscov/cli.hpp"

int main(int argc, char** argv) { return epscov::run_cli(argc, argv, std::cout, std::cerr); }
