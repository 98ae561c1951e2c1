#include <iostream>

#include "affine/cli.hpp"

int main(int argc, char** argv) {
  const auto result = affine::cli::run_command(std::vector<std::string>(argv + 1, argv + argc));
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
