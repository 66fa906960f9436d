#include <iostream>

#include "pairdim/cli.hpp"

int main(int argc, char** argv) {
  return pairdim::cli::run(argc, argv, std::cout, std::cerr);
}
