#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "nchilb/cli.hpp"

int main(int argc, char** argv) {
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    nchilb::CommandResult result = nchilb::run(args);
    std::fputs(result.output.c_str(), stdout);
    return result.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "nchilb: %s\n", e.what());
    return 1;
  }
}
