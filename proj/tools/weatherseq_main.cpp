#include <vector>

#include "weatherseq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wseq::cli::run(args);
}
