#include <iostream>

#include "qiw/cli.hpp"

int main(int argc, char** argv) { return qiw::cli::run(argc, argv, std::cout, std::cerr); }
