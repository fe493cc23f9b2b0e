#include <iostream>

#include "cyclefem/cli.hpp"

int main(int argc, char** argv) { return cyclefem::cli::run(argc, argv, std::cerr); }
