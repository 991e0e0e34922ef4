#include "mdlcomp/cli.hpp"

int main(int argc, char** argv) { return mdlcomp::run_command(argc, argv); }
