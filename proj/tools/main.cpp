#include "bvs/cli_app.hpp"

int main(int argc, char** argv) { return bvs::run_cli(argc, argv); }
