#include "sumcard/cli_main.hpp"

int main(int argc, char** argv) { return sumcard::cli::run(argc, argv); }
