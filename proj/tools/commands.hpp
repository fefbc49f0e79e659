#pragma once

#include "homegeo/io.hpp"

#include <filesystem>
#include <string>

namespace homegeo::cli {

struct Context {
  std::filesystem::path out_dir;
  std::string stem;  // artifact name prefix
  ExperimentReport& report;

  /// Path for an artifact, recorded in the report.
  std::string artifact(const std::string& suffix);
};

/// Top-level keys each command accepts (besides "checks" and "seed").
const std::vector<std::string>& allowed_keys(const std::string& command);

void run_verify(const Json& cfg, Context& ctx);
void run_mincurv(const Json& cfg, Context& ctx);
void run_solve_graph(const Json& cfg, Context& ctx);
void run_plateau(const Json& cfg, Context& ctx);
void run_sweep(const Json& cfg, Context& ctx);
void run_areas(const Json& cfg, Context& ctx);
void run_maxprinciple(const Json& cfg, Context& ctx);

}  // namespace homegeo::cli
