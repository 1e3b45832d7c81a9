#include "entire/cli.hpp"

int main(int argc, char** argv) { return entire::cli::run(argc, argv); }
