// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "recip/cli.hpp"

int main(int argc, char** argv) { return recip::cli::run(argc, argv, std::cout, std::cerr); }
