#include <iostream>

#include "slidefft/cli.hpp"

int main(int argc, char** argv) {
  return slidefft::cli::run(argc, argv, std::cout, std::cerr);
}
