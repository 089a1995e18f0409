#include "circlex/cli.hpp"

int main(int argc, char** argv) { return circlex::cli::run_cli(argc, argv); }
