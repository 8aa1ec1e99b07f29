#include "cli.hpp"

int main(int argc, char** argv) { return infersched::run_cli(argc, argv); }
