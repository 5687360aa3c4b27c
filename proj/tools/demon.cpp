#include <iostream>
#include <string>
#include <vector>

#include "demon/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return demon::run_cli(args, std::cout, std::cerr);
}
