#include "cli/cli.hpp"

int main(int argc, char** argv) { return sdnn::cli::main(argc, argv); }
