#include "curvpca_cli.hpp"

int main(int argc, char** argv) { return curvpca::cli::run(argc, argv); }
