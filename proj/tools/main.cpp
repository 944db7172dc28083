#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  return photonstats::cli::run(argc, argv, std::cout, std::cerr);
}
