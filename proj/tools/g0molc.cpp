#include <iostream>

#include "g0molc/cli.hpp"

int main(int argc, char** argv) {
  return g0molc::cli::run(argc, argv, std::cout, std::cerr);
}
