#include <iostream>

#include "ergcap/cli.hpp"

int main(int argc, char** argv) { return ergcap::cli::run(argc, argv, std::cout, std::cerr); }
