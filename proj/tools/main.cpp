#include "vegflow/cli.hpp"

int main(int argc, char** argv) { return vegflow::run_main(argc, argv); }
