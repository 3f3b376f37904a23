#include <iostream>

#include "qgreedy/cli.hpp"

int main(int argc, char** argv) { return qgreedy::cli_dispatch(argc, argv, std::cout, std::cerr); }
