#include <iostream>

#include "tontine/cli.hpp"

int main(int argc, char** argv) { return tontine::cli::main_entry(argc, argv, std::cout, std::cerr); }
