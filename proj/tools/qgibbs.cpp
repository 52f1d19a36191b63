#include <iostream>

#include "qgibbs/cli.hpp"

int main(int argc, char** argv) { return qgibbs::run_cli(argc, argv, std::cout, std::cerr); }
