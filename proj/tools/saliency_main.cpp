#include <iostream>

#include "saliency/cli.hpp"

int main(int argc, char** argv) { return saliency::cli::run(argc, argv, std::cout, std::cerr); }
