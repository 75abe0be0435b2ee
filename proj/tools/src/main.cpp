#include "pulseforge_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return pulseforge::cli::main_entry(argc, argv, std::cout, std::cerr);
}
