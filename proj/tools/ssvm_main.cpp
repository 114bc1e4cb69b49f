#include "ssvm/cli.hpp"

int main(int argc, char** argv) { return ssvm::run_cli(argc, argv); }
