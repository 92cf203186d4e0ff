#include <iostream>

#include "pwdist/cli.h"

int main(int argc, char** argv) {
  return pwdist::run_cli(argc, argv, std::cout, std::cerr);
}
