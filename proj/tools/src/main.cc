#include <iostream>

#include "cli.h"

int main(int argc, char** argv) { return cctm::cli::Run(argc, argv, std::cout, std::cerr); }
