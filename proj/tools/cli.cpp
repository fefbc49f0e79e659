#include "cli.hpp"

#include "commands.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

namespace homegeo::cli {

namespace {

const std::vector<std::string> kCommands = {"verify", "mincurv", "solve-graph", "plateau",
                                            "sweep",  "areas",   "maxprinciple"};

const std::map<std::string, Json>& defaults() {
  static const std::map<std::string, Json> d = [] {
    std::map<std::string, Json> m;
    m["verify"] = Json{{"space", "sol3"}, {"suite", "geometry"}, {"n_points", 100}};
    m["mincurv"] = Json{{"space", "sol3"}, {"samples", 32}};
    m["solve-graph"] = Json{{"space", "nil3"},
                            {"domain", {{"kind", "annulus"}, {"r", 1.0}, {"R", 3.0}, {"n_angular", 64}, {"n_radial", 64}}},
                            {"boundary", "saddle"},
                            {"solver", {{"tol", 1e-8}, {"max_iter", 50}}},
                            {"refine", false},
                            {"second_start", false}};
    const Json annulus{{"space", "sol3"}, {"r", 1.0},          {"R", 4.0},        {"eps", 0.1},
                       {"h", 1.0},       {"resolution", 64},   {"mesh", "polar"}, {"spacing", 0.1},
                       {"solver", Json::object()}};
    m["plateau"] = annulus;
    m["plateau"]["perturbation"] = {{"trials", 100}, {"delta", 1e-3}};
    m["plateau"]["sample_radius"] = 1.5;
    m["sweep"] = annulus;
    m["sweep"]["sweep"] = {{"rho", 1.2}, {"c_step", 1e-3}, {"refine_tol", 1e-6}, {"contact_threshold", 1e-4},
                           {"n_angular", 128}, {"n_radial", 40}};
    m["areas"] = Json{{"space", "sol3"}, {"r", 1.0}, {"R", 4.0}, {"eps", 0.1}};
    m["maxprinciple"] = Json{{"space", "sol3"},
                             {"r", 1.0},
                             {"R", 4.0},
                             {"eps", 0.1},
                             {"h", 1.0},
                             {"weights", "delaunay"},
                             {"fields", 50},
                             {"field_tol", 1e-10},
                             {"inverse_coordinate", {{"enabled", true}, {"spacing", 0.1}, {"grad_tol", 1e-8}, {"tol", 1e-6}}}};
    return m;
  }();
  return d;
}

Json read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path);
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace

Json default_config(const std::string& command) {
  const auto it = defaults().find(command);
  if (it == defaults().end()) throw ConfigError("unknown subcommand '" + command + "'");
  return it->second;
}

std::string Context::artifact(const std::string& suffix) {
  const std::string p = (out_dir / (stem + suffix)).string();
  report.artifacts.push_back(p);
  return p;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, ExperimentReport* copy) {
  CLI::App app{"Numerical experiments on minimal surfaces in Nil3 and Sol3", "homegeo"};
  app.set_help_flag("--help", "print this help and exit");
  std::string command, config_path, out_dir = "out";
  std::optional<std::string> space, suite, weights;
  std::optional<double> r, R, eps, h;
  unsigned long long seed = 42;
  app.add_option("subcommand", command, "verify | mincurv | solve-graph | plateau | sweep | areas | maxprinciple")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_path, "experiment JSON");
  app.add_option("--space", space, "nil3 | sol3");
  app.add_option("--seed", seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--out", out_dir, "output directory (HOMEGEO_OUT overrides)")->capture_default_str();
  app.add_option("--suite", suite, "verify suite: geometry | surfaces | all");
  app.add_option("--r", r, "inner radius");
  app.add_option("--R", R, "outer radius");
  app.add_option("--eps", eps, "height offset of the inner circle");
  app.add_option("--h", h, "base level");
  app.add_option("--weights", weights, "maxprinciple Laplacian: uniform | cotan | delaunay");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  ExperimentReport report;
  report.command = command;
  const auto start = std::chrono::steady_clock::now();
  Json cfg;
  Context ctx{{}, command, report};
  try {
    cfg = default_config(command);
    if (!config_path.empty()) {
      const Json user = read_config_file(config_path);
      if (!user.is_object()) throw ConfigError("config must be a JSON object");
      cfg.merge_patch(user);
      ctx.stem = std::filesystem::path(config_path).stem().string();
    }
    if (space) cfg["space"] = *space;
    if (suite) cfg["suite"] = *suite;
    if (weights) cfg["weights"] = *weights;
    if (r) cfg["r"] = *r;
    if (R) cfg["R"] = *R;
    if (eps) cfg["eps"] = *eps;
    if (h) cfg["h"] = *h;
    cfg["seed"] = seed;
    const auto& allowed = allowed_keys(command);
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
      if (it.key() != "checks" && it.key() != "seed" &&
          std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
        throw ConfigError("unknown key '" + it.key() + "' for " + command);
    if (cfg.contains("checks") && !cfg["checks"].is_array()) throw ConfigError("checks must be an array of names");
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  report.config = cfg;

  if (const char* env = std::getenv("HOMEGEO_OUT"); env && *env) out_dir = env;
  ctx.out_dir = out_dir;
  try {
    std::filesystem::create_directories(ctx.out_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "usage error: cannot create output directory: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (command == "verify") run_verify(cfg, ctx);
    else if (command == "mincurv") run_mincurv(cfg, ctx);
    else if (command == "solve-graph") run_solve_graph(cfg, ctx);
    else if (command == "plateau") run_plateau(cfg, ctx);
    else if (command == "sweep") run_sweep(cfg, ctx);
    else if (command == "areas") run_areas(cfg, ctx);
    else run_maxprinciple(cfg, ctx);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    report.error = e.what();
  }

  if (cfg.contains("checks")) {
    std::vector<CheckResult> kept;
    for (const auto& name : cfg["checks"]) {
      if (!name.is_string()) {
        err << "usage error: check names must be strings\n";
        return kExitUsage;
      }
      const auto it = std::find_if(report.checks.begin(), report.checks.end(),
                                   [&](const CheckResult& c) { return c.name == name.get<std::string>(); });
      if (it == report.checks.end()) {
        if (!report.error.empty()) {
          kept.push_back({name.get<std::string>(), false, std::nan(""), std::nan("")});
          continue;
        }
        err << "usage error: unknown check '" << name.get<std::string>() << "' for " << command << "\n";
        return kExitUsage;
      }
      kept.push_back(*it);
    }
    report.checks = kept;
  }

  report.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string report_path = (ctx.out_dir / (ctx.stem + "_report.json")).string();
  try {
    write_report(report_path, report);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  for (const auto& c : report.checks)
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  value=%.6g  tol=%.3g", c.value, c.tol);
    out << (c.pass ? "PASS " : "FAIL ") << c.name << buf << "\n";
  }
  if (!report.error.empty()) out << "ERROR " << report.error << "\n";
  out << "report: " << report_path << "\n";
  if (copy) *copy = report;
  return report.all_pass() ? kExitPass : kExitCheckFailed;
}

}  // namespace homegeo::cli
