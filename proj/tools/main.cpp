#include <iostream>

#include "rdtlab/app.hpp"

int main(int argc, char** argv) { return rdt::app::run_cli(argc, argv, std::cout, std::cerr); }
