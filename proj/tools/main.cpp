#include "rgbw_cli.hpp"

int main(int argc, char** argv) { return rgbw::cli::run(argc, argv); }
