#include "flexwing/cli.hpp"

int main(int argc, char** argv) { return flexwing::run_cli(argc, argv); }
