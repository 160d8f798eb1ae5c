#include "twave/cli.hpp"

int main(int argc, char** argv) { return twave::cli::run(argc, argv); }
