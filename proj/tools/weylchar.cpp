#include "weylchar/cli.hpp"

int main(int argc, char** argv) { return weylchar::cli::main_entry(argc, argv); }
