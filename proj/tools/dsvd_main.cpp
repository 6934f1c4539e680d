// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "dsvd/cli.hpp"

int main(int argc, char** argv) { return dsvd::cli::main_entry(argc, argv, std::cout, std::cerr); }
