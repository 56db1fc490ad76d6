#include <iostream>

#include "clv/cli.hpp"

int main(int argc, char** argv) { return clv::cli::run(argc, argv, std::cout, std::cerr); }
