// wqed_main.cpp — entry point of the wqed command-line tool
#include "wqed/cli.hpp"

int main(int argc, char** argv) { return wqed::run(argc, argv); }
