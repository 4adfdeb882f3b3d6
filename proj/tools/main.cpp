#include "cli.hpp"

int main(int argc, char** argv) { return screwkit::cli::run_main(argc, argv); }
