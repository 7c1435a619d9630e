#include "kgqa/cli.hpp"

int main(int argc, char** argv) { return kgqa::run_cli(argc, argv); }
