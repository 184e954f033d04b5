#include "jch/io/cli.hpp"

int main(int argc, char** argv) { return jch::io::cli_main(argc, argv); }
