#include "l2graph/cli.hpp"

int main(int argc, char** argv) { return l2graph::run_cli(argc, argv); }
