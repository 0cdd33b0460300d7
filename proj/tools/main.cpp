#include "trustcons/cli.hpp"

int main(int argc, char** argv) { return trustcons::run_cli(argc, argv); }
