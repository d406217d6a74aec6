#include "cli.hpp"
int main(int argc, char** argv) { return capsep::cli::run(argc, argv); }
