#include <iostream>
#include <string>
#include <vector>

#include "strider/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return strider::cli::run(args, std::cout, std::cerr);
}
