#include <iostream>

#include "kappa/job.hpp"

int main(int argc, char** argv) {
  try {
    return kappa::run_cli(argc, argv, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
}
