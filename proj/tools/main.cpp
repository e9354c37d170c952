#include <iostream>

#include "mwdisc/cli.hpp"

int main(int argc, char** argv) {
  return mwdisc::run_cli(argc, argv, std::cout, std::cerr);
}
