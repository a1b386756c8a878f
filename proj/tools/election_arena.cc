#include <iostream>
#include <string>
#include <vector>

#include "election/cli/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return election::cli::RunCli(args, std::cout, std::cerr);
}
