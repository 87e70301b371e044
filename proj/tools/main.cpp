#include <iostream>

#include "inspectkit/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return inspectkit::cli::run(args, std::cout, std::cerr);
}
