#include "bstab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bstab::cli::dispatch(argc, argv, std::cout, std::cerr); }
