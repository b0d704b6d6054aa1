#include "covario/cli.hpp"

int main(int argc, char** argv) { return covario::cli::run(argc, argv); }
