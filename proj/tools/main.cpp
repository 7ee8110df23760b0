#include "choquard/cli.hpp"

int main(int argc, char** argv) { return choquard::run_cli(argc, argv); }
