// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_TOOLS_CLI_HPP
#define VIEWRET_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace viewret::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one subcommand. args[0] is the program name. Data goes to files or
/// `out`; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace viewret::cli

#endif  // VIEWRET_TOOLS_CLI_HPP
