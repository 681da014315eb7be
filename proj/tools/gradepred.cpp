#include <iostream>

#include "gradepred/commands.hpp"

int main(int argc, char** argv) { return gradepred::cli::run(argc, argv, std::cout, std::cerr); }
