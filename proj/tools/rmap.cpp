#include <iostream>
#include <string>
#include <vector>

#include "rmap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rmap::cli::run(args, std::cout, std::cerr);
}
