#include <iostream>
#include <string>
#include <vector>

#include "soue/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return soue::run_cli(args, std::cout, std::cerr);
}
