#include "gather/cli.hpp"

int main(int argc, char** argv) { return gather::cli::run_cli(argc, argv); }
