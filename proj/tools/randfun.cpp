#include "randfun/cli.hpp"

int main(int argc, char** argv) { return randfun::cli::run(argc, argv); }
