#include <iostream>
#include <string>
#include <vector>

#include "complab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    complab::RunConfig config = complab::parse_config(args);
    return complab::run_and_emit(config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
