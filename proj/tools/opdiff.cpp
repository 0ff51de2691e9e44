#include "opdiff/cli.hpp"

int main(int argc, char** argv) { return opdiff::run_cli(argc, argv); }
