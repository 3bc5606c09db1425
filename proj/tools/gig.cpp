#include "gig/pipeline.hpp"

int main(int argc, char** argv) { return gig::run_cli(argc, argv); }
