#include "windregime/pipeline.hpp"

int main(int argc, char** argv) { return wr::run_command(argc, argv); }
