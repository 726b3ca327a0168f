#include "efdiv/cli.hpp"

int main(int argc, char** argv) { return efdiv::cli::main_entry(argc, argv); }
