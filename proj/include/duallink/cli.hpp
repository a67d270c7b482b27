// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace duallink {

/// Entry point of the duallink tool: subcommands solve, bench, diag and gen.
/// Returns the process exit code; usage errors give a nonzero code and a
/// message on stderr.
int cli_entry(int argc, char** argv);

}  // namespace duallink
