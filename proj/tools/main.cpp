#include "conjorder/cli.hpp"

int main(int argc, char** argv) { return conjorder::cli_main(argc, argv); }
