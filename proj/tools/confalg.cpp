#include "confalg/cli/run.hpp"

int main(int argc, char** argv) { return confalg::cli::run(argc, argv); }
