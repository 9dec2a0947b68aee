#include <iostream>

#include "ljscat/cli.hpp"

int main(int argc, char** argv) { return ljscat::cli::run(argc, argv, std::cout, std::cerr); }
