#include "focklat/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return focklat::cli::run(argc, argv, std::cout, std::cerr); }
