#include "tracenorm/cli.hpp"

int main(int argc, char** argv) { return tracenorm::cli::run(argc, argv); }
