#include "cli.hpp"

int main(int argc, char** argv) { return nlsg::cli::main_entry(argc, argv); }
