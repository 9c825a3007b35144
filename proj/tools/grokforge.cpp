#include "grokforge/cli.hpp"

int main(int argc, char** argv) { return grokforge::cli::run_cli(argc, argv); }
