#include <vector>

#include <advrecon/cli.hpp>

int main(int argc, char** argv) {
  return advrecon::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
