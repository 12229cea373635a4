#include "fluctuon/cli.hpp"

int main(int argc, char** argv) { return fluctuon::cli::main_entry(argc, argv); }
