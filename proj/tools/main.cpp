#include <iostream>
#include <string>
#include <vector>

#include "rtfw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rtfw::cli::run(args, std::cout, std::cerr);
}
