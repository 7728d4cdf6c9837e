#include "fixrank/cli.hpp"

int main(int argc, char **argv) { return fixrank::cli::run(argc, argv); }
