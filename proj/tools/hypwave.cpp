#include <iostream>

#include "hypwave/cli.hpp"

int main(int argc, char** argv) {
  return hypwave::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
