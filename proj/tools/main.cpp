#include "carleson_lab/cli.hpp"

int main(int argc, char** argv) { return carleson_lab::cli::run(argc, argv); }
