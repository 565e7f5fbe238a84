#include <string>
#include <vector>

#include "caplab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return caplab::dispatch(args);
}
