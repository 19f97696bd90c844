#include "multspec/cli.hpp"

int main(int argc, char** argv) { return multspec::run_cli(argc, argv); }
