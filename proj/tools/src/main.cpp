#include <iostream>
#include <string>
#include <vector>

#include "detmcvi_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return detmcvi::cli::Run(args, std::cout, std::cerr);
}
