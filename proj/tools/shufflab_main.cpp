#include <iostream>
#include <string>
#include <vector>

#include "shufflab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return shufflab::run_cli(args, std::cout, std::cerr);
}
