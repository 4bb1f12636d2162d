#include "feas/cli.hpp"

int main(int argc, char** argv) { return feas::cli_dispatch(argc, argv); }
