#include <iostream>

#include "cvgeo_cli.hpp"

int main(int argc, char** argv) {
  return cvgeo::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                         std::cerr);
}
