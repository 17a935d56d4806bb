#include "ppde/cli_config.hpp"

int main(int argc, char** argv) { return ppde::run_cli(argc, argv); }
