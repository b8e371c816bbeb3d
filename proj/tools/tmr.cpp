#include "tmr/cli.hpp"

int main(int argc, char** argv) { return tmr::cli::run(argc, argv); }
