#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return fextq::cli::run(argc, argv, std::cout, std::cerr);
}
