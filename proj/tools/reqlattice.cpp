#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "reqlattice/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const bool color = std::getenv("REQLATTICE_NO_COLOR") == nullptr && ::isatty(STDOUT_FILENO);
  return reqlattice::cli::run(args, {std::cout, std::cerr, color});
}
