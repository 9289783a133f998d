#include "fjmgt_cli/cli.hpp"

int main(int argc, char** argv) { return fjmgt::cli::run(argc, argv); }
