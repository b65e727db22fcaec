#include "featred/cli.hpp"

int main(int argc, char** argv) { return featred::cli_main(argc, argv); }
