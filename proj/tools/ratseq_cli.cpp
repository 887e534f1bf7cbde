#include <iostream>

#include "ratseq/cli.hpp"

int main(int argc, char** argv) { return ratseq::cli::run(argc, argv, std::cout, std::cerr); }
