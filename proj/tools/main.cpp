#include "rsnl/commands.hpp"

int main(int argc, char** argv) { return rsnl::run_cli(argc, argv); }
