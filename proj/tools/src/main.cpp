#include "mapllt/harness/cli.hpp"

int main(int argc, char** argv) { return mapllt::harness::cli_main(argc, argv); }
