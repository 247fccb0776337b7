#include <iostream>

#include "epiq/cli.hpp"

int main(int argc, char** argv) { return epiq::run_cli(argc, argv, std::cout, std::cerr); }
