#include "zk/cli.hpp"

int main(int argc, char** argv) { return zk::cli::main(argc, argv); }
