#include "shtlab/cli.hpp"

int main(int argc, char** argv) { return shtlab::run_command(argc, argv); }
