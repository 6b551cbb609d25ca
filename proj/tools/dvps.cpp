#include "dvps/cli.hpp"

int main(int argc, char** argv) { return dvps::cli::run(argc, argv); }
