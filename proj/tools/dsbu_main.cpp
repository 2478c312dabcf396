#include <iostream>

#include "dsbu/app.hpp"

int main(int argc, char** argv) { return dsbu::run_cli(argc, argv, std::cout, std::cerr); }
