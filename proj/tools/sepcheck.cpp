#include <iostream>
#include <string>
#include <vector>

#include "sepcheck/app.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return sepcheck::app::run_cli(args, std::cout, std::cerr);
}
