#include <string>
#include <vector>

#include "srtfd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return srtfd::cli::cli_main(args);
}
