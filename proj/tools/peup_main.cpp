#include <iostream>

#include "peup/reports.hpp"

int main(int argc, char** argv) { return peup::reports::run_cli(argc, argv, std::cout, std::cerr); }
