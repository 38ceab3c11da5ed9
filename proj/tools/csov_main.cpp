#include <iostream>
#include <string>
#include <vector>

#include "csov/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return csov::run_cli(args, std::cout, std::cerr);
}
