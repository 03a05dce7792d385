#include <iostream>
#include <string>
#include <vector>

#include "weylstar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return weylstar::cli::run_command(args, std::cout, std::cerr);
}
