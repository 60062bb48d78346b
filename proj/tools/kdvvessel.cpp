#include "kdv/cli.hpp"

int main(int argc, char** argv) { return kdv::run_cli(argc, argv); }
