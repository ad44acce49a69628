#include <iostream>

#include "ctscuc/cli.hpp"

int main(int argc, char** argv) {
  return ctscuc::cli::main_entry(argc, argv, std::cout, std::cerr);
}
