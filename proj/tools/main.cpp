#include <string>
#include <vector>

#include "linbandit/cli.hpp"

int main(int argc, char** argv) {
  return linbandit::main_entry(std::vector<std::string>(argv + 1, argv + argc));
}
