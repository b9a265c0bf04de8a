#include <iostream>
#include <string>
#include <vector>

#include "navier_bubble/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return navier_bubble::cli::main_entry(args, std::cout, std::cerr);
}
