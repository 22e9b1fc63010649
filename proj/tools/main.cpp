#include <iostream>

#include "bandshare/cli.hpp"

int main(int argc, char** argv) { return bandshare::cli::run(argc, argv, std::cout, std::cerr); }
