#include "homegeo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace homegeo {

namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep a float marker so readers do not take it for an integer.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump_rec(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        os << (first ? "" : ",") << pad << Json(it.key()).dump() << sep;
        dump_rec(os, it.value(), indent, depth + 1);
        first = false;
      }
      os << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        os << (first ? "" : ",") << pad;
        dump_rec(os, v, indent, depth + 1);
        first = false;
      }
      os << close << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  dump_rec(os, j, indent, 0);
  return os.str();
}

double json_number(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError("key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

int json_int(const Json& j, const std::string& key) {
  const double x = json_number(j, key);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("key '" + key + "' must be an integer");
  return static_cast<int>(x);
}

std::string json_string(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "'");
  if (!j.at(key).is_string()) throw ConfigError("key '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

bool json_bool(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "'");
  if (!j.at(key).is_boolean()) throw ConfigError("key '" + key + "' must be true or false");
  return j.at(key).get<bool>();
}

Json to_json(const Point& p) {
  return Json{{"chart", to_string(p.chart)}, {"coordinates", {p.x[0], p.x[1], p.x[2]}}};
}

Point point_from_json(const Json& j) {
  reject_unknown(j, {"chart", "coordinates"}, "point");
  const Chart chart = j.contains("chart") ? parse_chart(json_string(j, "chart")) : Chart::Canonical;
  if (!j.contains("coordinates") || !j["coordinates"].is_array() || j["coordinates"].size() != 3)
    throw ConfigError("point needs three coordinates");
  Vec3 x;
  for (int i = 0; i < 3; ++i) {
    if (!j["coordinates"][i].is_number()) throw ConfigError("point coordinates must be numbers");
    x[i] = j["coordinates"][i].get<double>();
  }
  return Point(x, chart);
}

Json to_json(const Isometry& g) {
  if (g.kind == Isometry::Kind::Composite) {
    Json parts = Json::array();
    for (const Isometry& p : g.parts) parts.push_back(to_json(p));
    return Json{{"kind", to_string(g.kind)}, {"parts", parts}};
  }
  return Json{{"kind", to_string(g.kind)}, {"parameter", g.param}};
}

Isometry isometry_from_json(const Json& j) {
  reject_unknown(j, {"kind", "parameter", "parts"}, "isometry");
  Isometry::Kind kind;
  try {
    kind = parse_isometry_kind(json_string(j, "kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (kind == Isometry::Kind::Composite) {
    std::vector<Isometry> parts;
    if (j.contains("parts")) {
      if (!j["parts"].is_array()) throw ConfigError("isometry parts must be an array");
      for (const auto& p : j["parts"]) parts.push_back(isometry_from_json(p));
    }
    return Isometry::compose(std::move(parts));
  }
  return {kind, j.contains("parameter") ? json_number(j, "parameter") : 0.0, {}};
}

Json to_json(const RegionSpec& spec) {
  Json j{{"space", spec.reference == RegionSpec::Reference::SolSpecialPlane ? "sol3" : "nil3"},
         {"reference", to_string(spec.reference)},
         {"r", spec.r},
         {"R", spec.R},
         {"eps", spec.eps},
         {"h", spec.h}};
  if (spec.reference == RegionSpec::Reference::NilEntireGraph) j["graph"] = spec.graph.name;
  return j;
}

RegionSpec region_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  Space space;
  try {
    space = parse_space(json_string(j, "space"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  RegionSpec::Reference ref = space == Space::Sol3 ? RegionSpec::Reference::SolSpecialPlane
                                                   : RegionSpec::Reference::NilEntireGraph;
  if (j.contains("reference")) {
    try {
      ref = parse_reference(json_string(j, "reference"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  const bool sol_ref = ref == RegionSpec::Reference::SolSpecialPlane;
  if (sol_ref != (space == Space::Sol3)) throw ConfigError("reference '" + to_string(ref) + "' does not live in " + to_string(space));
  const double r = json_number(j, "r"), R = json_number(j, "R"), eps = json_number(j, "eps");
  RegionSpec spec;
  switch (ref) {
    case RegionSpec::Reference::SolSpecialPlane:
      spec = RegionSpec::sol(r, R, eps, j.contains("h") ? json_number(j, "h") : 1.0);
      break;
    case RegionSpec::Reference::NilVerticalPlane:
      spec = RegionSpec::nil_vertical(r, R, eps, j.contains("h") ? json_number(j, "h") : 1.0);
      break;
    case RegionSpec::Reference::NilEntireGraph: {
      EntireGraph g = EntireGraph::zero();
      if (j.contains("graph")) {
        try {
          g = EntireGraph::from_name(json_string(j, "graph"));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
      spec = RegionSpec::nil_graph(r, R, eps, g, j.contains("h") ? json_number(j, "h") : 0.0);
      break;
    }
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

MinimizeOptions minimize_options_from_json(const Json& j) {
  reject_unknown(j, {"max_iter", "grad_tol", "motion", "n_radial", "grading", "lbfgs_memory", "armijo",
                     "min_angle_deg", "area_floor", "quadrature", "exec"},
                 "solver");
  MinimizeOptions o;
  if (j.contains("max_iter")) o.max_iter = json_int(j, "max_iter");
  if (j.contains("grad_tol")) o.grad_tol = json_number(j, "grad_tol");
  if (j.contains("motion")) {
    const std::string m = json_string(j, "motion");
    if (m == "graph_axis") o.motion = Motion::GraphAxis;
    else if (m == "free") o.motion = Motion::Free;
    else throw ConfigError("solver.motion must be graph_axis or free");
  }
  if (j.contains("n_radial")) o.n_radial = json_int(j, "n_radial");
  if (j.contains("grading")) o.grading = json_number(j, "grading");
  if (j.contains("lbfgs_memory")) o.lbfgs_memory = json_int(j, "lbfgs_memory");
  if (j.contains("armijo")) o.armijo = json_number(j, "armijo");
  if (j.contains("min_angle_deg")) o.min_angle_deg = json_number(j, "min_angle_deg");
  if (j.contains("area_floor")) o.area_floor = json_number(j, "area_floor");
  if (j.contains("quadrature")) {
    const std::string q = json_string(j, "quadrature");
    if (q == "centroid") o.quadrature = Quadrature::Centroid;
    else if (q == "three_point") o.quadrature = Quadrature::ThreePoint;
    else throw ConfigError("solver.quadrature must be centroid or three_point");
  }
  if (j.contains("exec")) {
    const std::string e = json_string(j, "exec");
    if (e == "serial") o.exec = Exec::Serial;
    else if (e == "parallel") o.exec = Exec::Parallel;
    else throw ConfigError("solver.exec must be serial or parallel");
  }
  if (o.max_iter < 0 || !(o.grad_tol > 0) || o.lbfgs_memory < 1 || o.n_radial < 2)
    throw ConfigError("solver options out of range");
  return o;
}

Json to_json(const MinimizeOptions& o) {
  return Json{{"max_iter", o.max_iter},
              {"grad_tol", o.grad_tol},
              {"motion", o.motion == Motion::GraphAxis ? "graph_axis" : "free"},
              {"n_radial", o.n_radial},
              {"grading", o.grading},
              {"lbfgs_memory", o.lbfgs_memory},
              {"armijo", o.armijo},
              {"min_angle_deg", o.min_angle_deg},
              {"area_floor", o.area_floor},
              {"quadrature", o.quadrature == Quadrature::Centroid ? "centroid" : "three_point"},
              {"exec", o.exec == Exec::Serial ? "serial" : "parallel"}};
}

SweepOptions sweep_options_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("sweep must be a JSON object");
  SweepOptions o;
  if (j.contains("c_step")) o.c_step = json_number(j, "c_step");
  if (j.contains("refine_tol")) o.refine_tol = json_number(j, "refine_tol");
  if (j.contains("contact_threshold")) o.contact_threshold = json_number(j, "contact_threshold");
  if (!(o.c_step > 0) || !(o.refine_tol > 0) || !(o.contact_threshold > 0))
    throw ConfigError("sweep step and tolerances must be positive");
  return o;
}

bool ExperimentReport::all_pass() const {
  if (!error.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void ExperimentReport::add(const std::string& name, bool pass, double value, double tol) {
  for (const auto& c : checks)
    if (c.name == name) throw std::logic_error("duplicate check " + name);
  checks.push_back({name, pass, value, tol});
}

Json ExperimentReport::to_json() const {
  Json j;
  j["command"] = command;
  j["config"] = config;
  Json cs = Json::array();
  for (const auto& c : checks) cs.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tol", c.tol}});
  j["checks"] = cs;
  j["artifacts"] = artifacts;
  j["duration_s"] = duration_s;
  j["results"] = results;
  if (!error.empty()) j["error"] = error;
  return j;
}

void write_report(const std::string& path, const ExperimentReport& r) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << dump_json(r.to_json()) << '\n';
}

void write_height_profile_csv(std::ostream& os, const std::vector<HeightProfileRow>& rows) {
  os << "radius,mean,min,max\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", row.radius, row.mean, row.min, row.max);
    os << buf;
  }
}

}  // namespace homegeo
