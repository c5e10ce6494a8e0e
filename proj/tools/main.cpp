#include <iostream>

#include "pragproof/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pragproof::cli::dispatch(args, std::cout, std::cerr);
}
