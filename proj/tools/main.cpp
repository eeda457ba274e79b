#include <iostream>

#include "madc_cli.hpp"

int main(int argc, char** argv) { return madc::cli::run(argc, argv, std::cout, std::cerr); }
