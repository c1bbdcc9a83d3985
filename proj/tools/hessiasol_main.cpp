#include "hessiasol/cli.hpp"

int main(int argc, char** argv) { return hessiasol::cli::run_main(argc, argv); }
