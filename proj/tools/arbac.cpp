#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "arbac/cli.hpp"

int main(int argc, char** argv) {
  const auto max_states = arbac::cli::max_states_from_env(std::getenv(arbac::cli::kMaxStatesEnv));
  std::vector<std::string> args(argv, argv + argc);
  return arbac::cli::run(args, {std::cin, std::cout, std::cerr},
                         max_states.value_or(arbac::cli::kDefaultMaxStates));
}
