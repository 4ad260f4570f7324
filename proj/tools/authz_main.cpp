#include <iostream>
#include <string>
#include <vector>

#include "authz/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return static_cast<int>(authz::cli::run(args, std::cout, std::cerr));
}
