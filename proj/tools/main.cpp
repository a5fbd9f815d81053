#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ogt::cli::dispatch(argc, argv, std::cout, std::cerr); }
