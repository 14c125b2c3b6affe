#include <iostream>
#include <string>
#include <vector>

#include "subadd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return subadd::run_cli(args, std::cout, std::cerr);
}
