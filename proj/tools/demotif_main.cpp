#include "demotif/cli.hpp"

int main(int argc, char** argv) { return demotif::cli::run(argc, argv); }
