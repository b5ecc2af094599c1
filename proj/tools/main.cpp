#include <iostream>
#include <string>
#include <vector>

#include "hammctr/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hammctr::cli::run(args, std::cout, std::cerr);
}
