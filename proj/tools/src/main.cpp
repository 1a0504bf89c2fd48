#include <iostream>

#include "condensate_cli/app.hpp"

int main(int argc, char** argv) {
  return condensate::cli::run(argc, argv, std::cout, std::cerr);
}
