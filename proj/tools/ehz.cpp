#include "ehz/cli.hpp"

int main(int argc, char** argv) { return ehz::cli::run(argc, argv, std::cout, std::cerr); }
