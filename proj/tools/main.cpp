#include <iostream>

#include "tvscb/cli.hpp"

int main(int argc, char** argv) { return tvscb::run_cli(argc, argv, std::cout, std::cerr); }
