#include "gsampler/app.hpp"

int main(int argc, char** argv) { return gsampler::main_cli(argc, argv); }
