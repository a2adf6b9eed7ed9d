#include <iostream>
#include <string>
#include <vector>

#include "lienard/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lienard::run(args, std::cout, std::cerr);
}
