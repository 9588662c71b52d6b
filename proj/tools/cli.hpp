// SPDX-License-Identifier: Apache-2.0
//
// The `lgas` command line: horizons, theory, simulate, fit.

#ifndef LGAS_TOOLS_CLI_HPP
#define LGAS_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lgas::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kInvalidFlags = 2,
    kIncipientOrClosed = 3,
    kDegenerateGeometry = 4,
    kFitFailure = 5,
};

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lgas::cli

#endif  // LGAS_TOOLS_CLI_HPP
