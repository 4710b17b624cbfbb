// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: builds the configured model, runs one experiment
// subcommand and writes CSV results. See README.md for config examples.

#include <cstdio>
#include <iostream>

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::fprintf(stderr, "not implemented yet\n");
    return 1;
}
