#include <exception>
#include <iostream>

#include "cctk/cli.hpp"

int main(int argc, char** argv) {
  try {
    return cctk::cli::run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "cctk: internal error: " << e.what() << '\n';
    return 1;
  }
}
