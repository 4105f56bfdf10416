#include "navmem/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return navmem::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
