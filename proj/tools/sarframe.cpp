#include "sarframe/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sarframe::run_cli(argc, argv, std::cout, std::cerr); }
