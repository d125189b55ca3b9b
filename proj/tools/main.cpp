#include "fjdyn/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fjdyn::run_cli(argc, argv, std::cout, std::cerr); }
