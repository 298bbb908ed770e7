#include <iostream>
#include <string>
#include <vector>

#include "lhzmf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lhz::cli::main(args, std::cout, std::cerr);
}
