#include "sps/cli.hpp"

int main(int argc, char** argv) { return sps::cli::dispatch(argc, argv); }
