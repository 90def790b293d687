#include <iostream>
#include <string>
#include <vector>

#include "adjprof/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return adjprof::run_cli(args, std::cout, std::cerr);
}
