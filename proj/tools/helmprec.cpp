#include <iostream>

#include "helmprec/cli.hpp"

int main(int argc, char** argv) {
  return helmprec::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr);
}
