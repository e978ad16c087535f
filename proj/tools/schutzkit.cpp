#include <iostream>

#include "schutzkit/cli.hpp"

int main(int argc, char** argv) { return schutzkit::run_cli(argc, argv, std::cout, std::cerr); }
