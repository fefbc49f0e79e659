#pragma once

#include "homegeo/geometry.hpp"
#include "homegeo/isometry.hpp"
#include "homegeo/maxprinciple.hpp"
#include "homegeo/plateau.hpp"

#include "json.hpp"

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace homegeo {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON text with every floating-point number printed with 17 significant
/// digits. Non-finite numbers become null.
std::string dump_json(const Json& j, int indent = 2);

/// {"chart": "canonical"|"nil_y", "coordinates": [c1, c2, c3]}
Json to_json(const Point& p);
Point point_from_json(const Json& j);

/// {"kind": ..., "parameter": c} or {"kind": "composite", "parts": [...]}
Json to_json(const Isometry& g);
Isometry isometry_from_json(const Json& j);

/// Experiment keys "space", "reference", "r", "R", "eps", "h", plus "graph"
/// (entire-graph name) for the Nil3 graph reference.
Json to_json(const RegionSpec& spec);
RegionSpec region_spec_from_json(const Json& j);

/// Reads the "solver" block; unknown keys are rejected.
MinimizeOptions minimize_options_from_json(const Json& j);
Json to_json(const MinimizeOptions& o);

/// Reads the numeric fields of the "sweep" block that SweepOptions owns.
SweepOptions sweep_options_from_json(const Json& j);

/// Typed lookups that throw ConfigError with the key name.
double json_number(const Json& j, const std::string& key);
int json_int(const Json& j, const std::string& key);
std::string json_string(const Json& j, const std::string& key);
bool json_bool(const Json& j, const std::string& key);

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tol = 0.0;
};

struct ExperimentReport {
  std::string command;
  Json config = Json::object();
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;
  double duration_s = 0.0;
  Json results = Json::object();  // command-specific measurements
  std::string error;              // set when the pipeline threw

  bool all_pass() const;
  /// Appends a check; names must be unique.
  void add(const std::string& name, bool pass, double value, double tol);
  Json to_json() const;
};

void write_report(const std::string& path, const ExperimentReport& r);

/// "radius,mean,min,max" with a header.
void write_height_profile_csv(std::ostream& os, const std::vector<HeightProfileRow>& rows);

}  // namespace homegeo
