#include <iostream>

#include "pleatlab/cli.hpp"

int main(int argc, char** argv) { return pleatlab::cli::run(argc, argv, std::cout, std::cerr); }
