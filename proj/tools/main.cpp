#include <iostream>
#include <string>
#include <vector>

#include "ionpar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ionpar::run_cli(args, std::cout, std::cerr);
}
