#include "fixtime/cli.hpp"

int main(int argc, char** argv) { return fixtime::cli_run(argc, argv); }
