#include <iostream>

#include "patchlab/cli.hpp"

int main(int argc, char** argv) { return patchlab::run_cli(argc, argv, std::cout, std::cerr); }
