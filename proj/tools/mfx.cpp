#include "mfx/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mfx::cli::run(argc, argv, std::cout, std::cerr); }
