#include "cli_app.hpp"

int main(int argc, char **argv) { return zeropack::cli::run(argc, argv); }
