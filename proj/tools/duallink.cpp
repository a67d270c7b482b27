// SPDX-License-Identifier: Apache-2.0
#include "duallink/cli.hpp"

int main(int argc, char** argv) { return duallink::cli_entry(argc, argv); }
