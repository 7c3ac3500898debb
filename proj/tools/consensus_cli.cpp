#include <iostream>

#include <consensus_spectra/cli.hpp>

int main(int argc, char** argv) { return consensus::run_cli(argc, argv, std::cout, std::cerr); }
