#include "sceig/cli.hpp"

int main(int argc, char** argv) { return sceig::run_cli(argc, argv); }
