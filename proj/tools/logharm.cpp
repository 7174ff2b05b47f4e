#include <iostream>

#include "logharm/cli.hpp"

int main(int argc, char** argv) { return logharm::cli::run(argc, argv, std::cout, std::cerr); }
