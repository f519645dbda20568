#include "gim/harness.hpp"

int main(int argc, char** argv) { return gim::harness::cli_main(argc, argv); }
