#include <iostream>
#include <string>
#include <vector>

#include "spectl/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spectl::run_cli(args, std::cout, std::cerr);
}
