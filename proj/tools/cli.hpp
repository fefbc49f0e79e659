#pragma once

#include "homegeo/io.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace homegeo::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses `homegeo <subcommand> [options]`, runs the experiment, writes the
/// report and artifacts, and returns the exit code. The report is also
/// copied to *report when given.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                ExperimentReport* report = nullptr);

/// Default configuration of a subcommand (before the config file and flags).
Json default_config(const std::string& command);

}  // namespace homegeo::cli
