#include "affm/cli/run.hpp"

int main(int argc, char** argv) { return affm::cli::run(argc, argv); }
