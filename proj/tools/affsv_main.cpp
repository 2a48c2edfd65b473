#include <iostream>

#include "affsv/cli.hpp"

int main(int argc, char** argv) { return affsv::run_cli(argc, argv, std::cout, std::cerr); }
