#include "cli.hpp"

int main(int argc, char** argv) { return ncfield::cli::run_cli(argc, argv); }
