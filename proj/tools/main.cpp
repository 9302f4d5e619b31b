#include "cli/app.hpp"

int main(int argc, char** argv) { return weldkit::cli::run(argc, argv); }
