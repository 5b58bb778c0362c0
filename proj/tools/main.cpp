#include "cli.hpp"

int main(int argc, char** argv) { return betadyn::cli::run(argc, argv); }
