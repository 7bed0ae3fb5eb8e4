#include <iostream>

#include "reflbound/cli.hpp"

int main(int argc, char** argv) { return reflbound::cli::run(argc, argv, std::cout, std::cerr); }
