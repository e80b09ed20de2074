#include "cli.hpp"

int main(int argc, char** argv) { return coboson::cli::main_entry(argc, argv); }
