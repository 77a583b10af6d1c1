#include "lagmin/cli.hpp"

int main(int argc, char** argv) { return lagmin::cli::run(argc, argv); }
