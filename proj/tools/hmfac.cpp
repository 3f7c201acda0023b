#include "hmfac/cli.hpp"

int main(int argc, char** argv) { return hmfac::cli::run(argc, argv); }
