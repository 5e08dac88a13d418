#include "fraceig/cli.hpp"

int main(int argc, char** argv) { return fraceig::cli::run(argc, argv); }
