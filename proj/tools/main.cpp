#include <iostream>

#include "vetrank/cli.hpp"

int main(int argc, char** argv) { return vetrank::cli::run(argc, argv, std::cout, std::cerr); }
