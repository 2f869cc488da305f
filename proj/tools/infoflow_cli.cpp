#include <string>
#include <vector>

#include "infoflow/cli_runner.hpp"

int main(int argc, char** argv) {
  return infoflow::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
