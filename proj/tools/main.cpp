#include "pitrom/cli.hpp"

int main(int argc, char** argv) { return pitrom::cli_main(argc, argv); }
