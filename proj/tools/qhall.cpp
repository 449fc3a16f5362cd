#include <iostream>

#include "qhall/cli.hpp"

int main(int argc, char** argv) {
  return qhall::cli::run(argc, argv, std::cout, std::cerr);
}
