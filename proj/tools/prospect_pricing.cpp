#include <iostream>
#include <string>
#include <vector>

#include "prospect_pricing/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return pricing::cli::dispatch(args, std::cout, std::cerr);
}
