#include "she_cli/run.hpp"

int main(int argc, char** argv) { return she::cli::cli_main(argc, argv); }
