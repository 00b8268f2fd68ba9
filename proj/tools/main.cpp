#include <iostream>
#include <string>
#include <vector>

#include "approxsmt/harness.hpp"

int main(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return approxsmt::runCli(args, std::cout, std::cerr);
}
