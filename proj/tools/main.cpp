#include <iostream>
#include <string>
#include <vector>

#include "xbell/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return xbell::cli::run(args, std::cout, std::cerr);
}
