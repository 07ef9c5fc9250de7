#include <iostream>

#include "lhgat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lhgat::cli::run(args, std::cout, std::cerr);
}
