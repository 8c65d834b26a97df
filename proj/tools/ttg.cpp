#include "ttg/cli/cli.hpp"

int main(int argc, char** argv) { return ttg::run_cli(argc, argv); }
