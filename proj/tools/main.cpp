#include <iostream>
#include <string>
#include <vector>

#include "scipi_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return scipi::cli::run(args, std::cout, std::cerr);
}
