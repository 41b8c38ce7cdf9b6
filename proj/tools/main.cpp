#include "skelplan/cli.hpp"

int main(int argc, char** argv) {
  return skelplan::run_cli(argc, argv);
}
