// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return gspdrop::cli::run(argc, argv, std::cout, std::cerr); }
