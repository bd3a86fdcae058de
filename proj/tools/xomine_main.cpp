#include "xomine/pipeline.hpp"

int main(int argc, char** argv) { return xomine::cli_main(argc, argv); }
