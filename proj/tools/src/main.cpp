#include <iostream>

#include "nilprob/cli.hpp"

int main(int argc, char** argv) { return nilprob::cli::main_entry(argc, argv, std::cout, std::cerr); }
