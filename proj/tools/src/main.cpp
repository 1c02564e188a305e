#include <iostream>

#include "bacs_cli/commands.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return bacs::cli::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
