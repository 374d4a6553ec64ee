#include "graphon_games/cli.hpp"

int main(int argc, char** argv) { return graphon_games::cli::main_entry(argc, argv); }
