#include <iostream>
#include <string>
#include <vector>

#include "hardyspec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hardyspec::cli::parse_and_run(args, std::cout, std::cerr);
}
