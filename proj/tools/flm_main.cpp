#include <iostream>
#include <string>
#include <vector>

#include "flm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return flm::run_cli(args, std::cout, std::cerr);
}
