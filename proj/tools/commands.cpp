#include "commands.hpp"

#include "homegeo/graph.hpp"
#include "homegeo/kernels.hpp"
#include "homegeo/named_surfaces.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

namespace homegeo::cli {

namespace {

constexpr double kPi = std::numbers::pi;

SpaceId space_of(const Json& cfg) {
  try {
    return SpaceId(parse_space(json_string(cfg, "space")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

unsigned long long seed_of(const Json& cfg) { return cfg.at("seed").get<unsigned long long>(); }

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------- verify

Mat3 jacobian(const std::function<Vec3(const Vec3&)>& f, const Vec3& x, double h = 1e-5) {
  Mat3 j;
  for (int l = 0; l < 3; ++l) j.col(l) = (f(x + h * Vec3::Unit(l)) - f(x - h * Vec3::Unit(l))) / (2 * h);
  return j;
}

// Frame components of nabla_{E_i} E_j from centred-difference Christoffel symbols.
Vec3 connection_fd(const SpaceId& id, const Vec3& x, int i, int j, double h = 1e-5) {
  std::array<Mat3, 3> dg;
  for (int l = 0; l < 3; ++l) dg[l] = (metric(id, x + h * Vec3::Unit(l)) - metric(id, x - h * Vec3::Unit(l))) / (2 * h);
  const Mat3 g = metric(id, x), ginv = g.inverse(), f = frame(id, x);
  const Vec3 ei = f.col(i), ej = f.col(j);
  Vec3 v = (frame(id, x + h * ei).col(j) - frame(id, x - h * ei).col(j)) / (2 * h);
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double gamma = 0.0;
        for (int l = 0; l < 3; ++l) gamma += 0.5 * ginv(k, l) * (dg[a](b, l) + dg[b](a, l) - dg[l](a, b));
        v[k] += gamma * ei[a] * ej[b];
      }
  return f.transpose() * g * v;
}

std::vector<Isometry> sample_isometries(Space s) {
  if (s == Space::Sol3)
    return {Isometry::sol_translate_x1(0.7), Isometry::sol_translate_x2(-1.3), Isometry::sol_tc(0.6),
            Isometry::sol_sigma(), Isometry::sol_tau(), Isometry::sol_tc(-0.4).then(Isometry::sol_sigma())};
  return {Isometry::nil_translate1(1.2), Isometry::nil_translate2(-0.9), Isometry::nil_vertical(2.0),
          Isometry::nil_rotate(0.8), Isometry::nil_reflect(), Isometry::nil_rotate(0.3).then(Isometry::nil_translate1(-1.0))};
}

void geometry_suite(const SpaceId& base, int n_points, unsigned long long seed, ExperimentReport& rep) {
  std::vector<SpaceId> ids{base};
  if (base.space == Space::Nil3) ids.push_back(SpaceId::nil3_y());
  for (const SpaceId& id : ids) {
    const std::string suffix = id.chart == Chart::NilY ? ":nil_y" : "";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    std::vector<Vec3> pts;
    for (int n = 0; n < n_points; ++n) pts.emplace_back(coord(rng), coord(rng), coord(rng));

    double ortho = 0.0, conn = 0.0, pull = 0.0, lie = 0.0;
    for (const Vec3& x : pts) {
      const Mat3 f = frame(id, x);
      ortho = std::max(ortho, max_abs(f.transpose() * metric(id, x) * f - Mat3::Identity()));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          conn = std::max(conn, (connection_fd(id, x, i, j) -
                                 frame_connection(id.space, Vec3::Unit(i), Vec3::Unit(j)))
                                    .cwiseAbs()
                                    .maxCoeff());
      for (const Isometry& g : sample_isometries(id.space)) {
        const Mat3 j = jacobian([&](const Vec3& y) { return apply_isometry_raw(id, g, y); }, x);
        pull = std::max(pull, max_abs(j.transpose() * metric(id, apply_isometry_raw(id, g, x)) * j - metric(id, x)));
      }
      const int fields = id.space == Space::Sol3 ? 3 : 4;
      for (int k = 1; k <= fields; ++k) {
        const auto F = [&](const Vec3& y) { return killing_field_at(id, k, Point(y, id.chart)); };
        const Mat3 dF = jacobian(F, x);
        Mat3 L = metric(id, x) * dF + dF.transpose() * metric(id, x);
        const auto dg = metric_partials(id, x);
        const Vec3 Fx = F(x);
        for (int l = 0; l < 3; ++l) L += Fx[l] * dg[l];
        lie = std::max(lie, max_abs(L));
      }
    }
    rep.add("frame_orthonormal" + suffix, ortho <= 1e-12, ortho, 1e-12);
    rep.add("connection_table_fd" + suffix, conn <= 1e-6, conn, 1e-6);
    rep.add("isometries_preserve_metric" + suffix, pull <= 1e-6, pull, 1e-6);
    rep.add("killing_fields" + suffix, lie <= 1e-6, lie, 1e-6);
  }

  const auto& t = connection_table(base.space);
  double compat = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) compat = std::max(compat, std::abs(t[k][i][j] + t[k][j][i]));
  rep.add("connection_metric_compatible", compat == 0.0, compat, 0.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  if (base.space == Space::Sol3) {
    const auto group = sol_isotropy_group();
    std::vector<Vec3> probes;
    for (int n = 0; n < 5; ++n) probes.emplace_back(coord(rng), coord(rng), coord(rng));
    double worst = 0.0;
    for (const auto& a : group)
      for (const auto& b : group) {
        double best = 1e300;
        for (const auto& g : group) {
          double d = 0.0;
          for (const Vec3& x : probes)
            d = std::max(d, (apply_isometry_raw(base, a.then(b), x) - apply_isometry_raw(base, g, x)).norm());
          best = std::min(best, d);
        }
        worst = std::max(worst, best);
      }
    rep.add("isotropy_group_closed", group.size() == 8 && worst <= 1e-12, worst, 1e-12);
  } else {
    double round = 0.0, push = 0.0;
    for (int n = 0; n < n_points; ++n) {
      const Vec3 x(coord(rng), coord(rng), coord(rng));
      const Point y = nil_chart_convert(Point(x), Chart::NilY);
      round = std::max(round, (nil_chart_convert(y, Chart::Canonical).x - x).norm());
      const Mat3 j = nil_y_jacobian(x);
      push = std::max(push, max_abs(j.transpose() * metric(SpaceId::nil3_y(), y.x) * j - metric(base, x)));
    }
    rep.add("chart_roundtrip", round <= 1e-12, round, 1e-12);
    rep.add("nil_y_metric_pushforward", push <= 1e-12, push, 1e-12);
  }
}

// ---------------------------------------------------------------- mincurv

template <class F>
void for_samples(const ParamSurface& s, int n, F&& f) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      f(s.u0 + (i + 0.5) * (s.u1 - s.u0) / n, s.v0 + (j + 0.5) * (s.v1 - s.v0) / n);
}

GraphGrid nil_subharmonic_graph() {
  const auto d = GraphDomain::rectangle(0.5, 2.5, -1, 1, 40, 40);
  return solve_minimal_graph(d, SpaceId::nil3(),
                             [](double x, double y) { return 0.3 * x * y - 0.2 * y * y + 0.1 * std::sin(3 * x); });
}

void surface_suite(const SpaceId& id, int n, ExperimentReport& rep, Json& results) {
  Json minimal = Json::object();
  for (const auto& named : surfaces::minimal_catalogue()) {
    if (named.space.space != id.space) continue;
    double worst = 0.0;
    for_samples(named.surface, n, [&](double u, double v) {
      worst = std::max(worst, std::abs(mean_curvature_at(named.space, named.surface, u, v)));
    });
    rep.add("minimal:" + named.name, worst <= 1e-4, worst, 1e-4);
    minimal[named.name] = worst;
  }
  results["max_abs_mean_curvature"] = minimal;

  const auto inv = SurfaceScalarField::inverse_coordinate(id.space == Space::Sol3 ? 2 : 0);
  double lowest = 1e300, highest = -1e300;
  if (id.space == Space::Sol3) {
    double tg = 0.0, special = 0.0;
    for (int j : {1, 2})
      for (double t : {-1.0, 0.0, 0.7}) {
        const auto s = surfaces::sol_coordinate_plane(j, t);
        for_samples(s, n, [&](double u, double v) { tg = std::max(tg, second_fundamental_norm_at(id, s, u, v)); });
      }
    for (double t : {0.0, 1.0, 2.0}) {
      const auto s = surfaces::sol_special_plane(t);
      for_samples(s, n, [&](double u, double v) {
        special = std::max(special, std::abs(second_fundamental_norm_at(id, s, u, v) - std::sqrt(2.0)));
      });
    }
    rep.add("totally_geodesic_coordinate_planes", tg <= 1e-4, tg, 1e-4);
    rep.add("special_plane_second_fundamental_form", special <= 1e-3, special, 1e-3);
    for (double a : {0.5, 1.0, 2.0}) {
      const auto s = surfaces::sol_exponential(a, 0.05, 2.0);
      for_samples(s, 16, [&](double u, double v) {
        const double lap = laplace_beltrami_at(id, s, inv, u, v);
        lowest = std::min(lowest, lap);
        highest = std::max(highest, lap);
      });
    }
  } else {
    double vertical = 0.0;
    for (const auto& s : {surfaces::nil_vertical_plane({0, 0}, {1, 0}), surfaces::nil_vertical_plane({1, 0}, {-1, 1})})
      for_samples(s, n, [&](double u, double v) {
        vertical = std::max(vertical, std::abs(second_fundamental_norm_at(id, s, u, v) - 1.0 / std::sqrt(2.0)));
      });
    rep.add("vertical_plane_second_fundamental_form", vertical <= 1e-3, vertical, 1e-3);
    const GraphGrid g = nil_subharmonic_graph();
    for (int k : g.domain.interior_nodes()) {
      const double lap = graph_laplace_beltrami(g, k, inv);
      lowest = std::min(lowest, lap);
      highest = std::max(highest, lap);
    }
  }
  const std::string f = id.space == Space::Sol3 ? "inverse_s" : "inverse_y1";
  rep.add("subharmonic:" + f, lowest >= -1e-8, lowest, 1e-8);
  rep.add("subharmonic_strict:" + f, highest > 1e-4, highest, 1e-4);
  results["laplacian_min"] = lowest;
  results["laplacian_max"] = highest;
}

// ---------------------------------------------------------------- solve-graph

GraphDomain domain_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("domain must be an object");
  const std::string kind = json_string(j, "kind");
  const int na = j.contains("n_angular") ? json_int(j, "n_angular") : 64;
  const int nr = j.contains("n_radial") ? json_int(j, "n_radial") : 64;
  GraphDomain d;
  if (kind == "annulus") {
    const auto sp = j.contains("spacing") && json_string(j, "spacing") == "geometric" ? GraphDomain::Spacing::Geometric
                                                                                       : GraphDomain::Spacing::Uniform;
    d = GraphDomain::annulus(json_number(j, "r"), json_number(j, "R"), na, nr, sp);
  } else if (kind == "disk") {
    d = GraphDomain::disk(json_number(j, "R"), na, nr);
  } else if (kind == "rectangle") {
    d = GraphDomain::rectangle(json_number(j, "x0"), json_number(j, "x1"), json_number(j, "y0"), json_number(j, "y1"),
                               j.contains("nx") ? json_int(j, "nx") : na, j.contains("ny") ? json_int(j, "ny") : nr);
  } else {
    throw ConfigError("domain.kind must be annulus, disk or rectangle");
  }
  try {
    d.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return d;
}

struct BoundaryChoice {
  DirichletData data;
  std::optional<DirichletData> exact;
};

BoundaryChoice boundary_from_json(const Json& cfg, const SpaceId& id) {
  const std::string name = json_string(cfg, "boundary");
  const auto saddle = [](double x, double y) { return 0.5 * x * y; };
  if (name == "saddle") {
    BoundaryChoice b{saddle, std::nullopt};
    if (id.space == Space::Nil3) b.exact = saddle;
    return b;
  }
  if (name == "zero") return {[](double, double) { return 0.0; }, [](double, double) { return 0.0; }};
  if (name == "constant") {
    const double c = json_number(cfg, "boundary_value");
    return {[c](double, double) { return c; }, [c](double, double) { return c; }};
  }
  if (name == "saddle_wave")
    return {[](double x, double y) { return 0.5 * x * y + 0.2 * std::cos(3 * std::atan2(y, x)); }, std::nullopt};
  if (name == "tilt")
    return {[](double x, double y) { return 1.0 + 0.1 * std::cos(std::atan2(y, x)); }, std::nullopt};
  throw ConfigError("boundary must be saddle, zero, constant, saddle_wave or tilt");
}

double max_error(const GraphGrid& g, const DirichletData& exact) {
  double e = 0.0;
  for (int k = 0; k < g.domain.num_nodes(); ++k) {
    const Vec2 p = g.domain.node(k);
    e = std::max(e, std::abs(g.heights[k] - exact(p[0], p[1])));
  }
  return e;
}

// ---------------------------------------------------------------- annulus pipelines

MinimizeResult minimize_annulus(const RegionSpec& spec, const Json& cfg) {
  const MinimizeOptions o = minimize_options_from_json(cfg.at("solver"));
  const std::string mesh = json_string(cfg, "mesh");
  if (mesh == "polar")
    return minimize_area_annulus(spec.space(), boundary_curves(spec, json_int(cfg, "resolution")), std::nullopt, o);
  if (mesh == "isotropic") return minimize_area(spec.space(), isotropic_annulus_mesh(spec, json_number(cfg, "spacing")), o);
  throw ConfigError("mesh must be polar or isotropic");
}

void annulus_results(const RegionSpec& spec, const MinimizeResult& res, double sample_radius, Json& results) {
  const auto slab = slab_and_monotonicity_check(spec, {res.mesh}, {spec.R}, sample_radius);
  const auto graph = graphness_check(spec.space(), res.mesh, spec.graph_frame_axis());
  results["area"] = res.area;
  results["grad_norm"] = res.grad_norm;
  results["slab_min"] = slab.entries[0].slab_min;
  results["slab_max"] = slab.entries[0].slab_max;
  results["inner_gap"] = slab.entries[0].inner_gap;
  results["is_graph"] = graph.is_graph;
  results["min_normal_component"] = graph.min_normal_component;
  results["c_star"] = nullptr;
  results["contact_kind"] = nullptr;
  results["iterations"] = res.iterations;
  results["min_angle_deg"] = res.min_angle_deg;
  results["max_mean_curvature"] = res.max_mean_curvature;
  results["vertices"] = res.mesh.vertices.size();
  results["triangles"] = res.mesh.triangles.size();
}

double sample_radius_of(const Json& cfg, const RegionSpec& spec) {
  const double s = cfg.contains("sample_radius") ? json_number(cfg, "sample_radius") : 0.5 * (spec.r + spec.R);
  if (!(s > spec.r && s < spec.R)) throw ConfigError("sample_radius must lie strictly between r and R");
  return s;
}

void sweep_stage(const RegionSpec& spec, const TriMesh& M, const Json& block, Context& ctx, Json& results) {
  static const std::vector<std::string> known = {"level", "rho", "outer", "c_max", "c_step", "refine_tol",
                                                 "contact_threshold", "n_angular", "n_radial"};
  if (!block.is_object()) throw ConfigError("sweep must be an object");
  for (auto it = block.begin(); it != block.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError("unknown key '" + it.key() + "' in sweep");
  const SweepOptions opts = sweep_options_from_json(block);
  const double level = block.contains("level") ? json_number(block, "level") : spec.h + 0.5 * spec.eps;
  const double rho = block.contains("rho") ? json_number(block, "rho") : 0.0;
  const double outer = block.contains("outer") ? json_number(block, "outer") : spec.R + 1.0;
  const double c_max = block.contains("c_max") ? json_number(block, "c_max") : spec.eps;
  const int na = block.contains("n_angular") ? json_int(block, "n_angular") : 128;
  const int nr = block.contains("n_radial") ? json_int(block, "n_radial") : 40;
  if (!(rho >= 0 && outer > rho) || !(c_max > 0)) throw ConfigError("sweep needs 0 <= rho < outer and c_max > 0");
  const TriMesh test = reference_patch_mesh(spec, level, rho, outer, na, nr);
  write_obj(ctx.artifact("_test_surface.obj"), test);
  const auto r = sweep_contact(spec.space(), M, test, SweepFamily::for_spec(spec, c_max), opts);
  const bool hit = r.contact_kind != SweepResult::Kind::None;
  results["c_star"] = hit ? Json(r.c_star) : Json(nullptr);
  results["contact_kind"] = to_string(r.contact_kind);
  results["sweep"] = Json{{"level", level},
                          {"rho", rho},
                          {"c_max", c_max},
                          {"boundary_distance", r.boundary_distance},
                          {"contact_point", {r.contact_point[0], r.contact_point[1], r.contact_point[2]}},
                          {"saturated", r.saturated},
                          {"disjoint_beyond_range", r.disjoint_beyond_range}};
  ctx.report.add("contact_interior", r.contact_kind == SweepResult::Kind::Interior, hit ? r.c_star : -1.0, 0.0);
  ctx.report.add("c_star_in_range", hit && r.c_star > 0.0 && r.c_star < c_max, hit ? r.c_star : -1.0, c_max);
  ctx.report.add("disjoint_beyond_range", r.disjoint_beyond_range, r.disjoint_beyond_range ? 1.0 : 0.0, 0.0);
}

void write_profile(const RegionSpec& spec, const TriMesh& m, Context& ctx) {
  std::vector<double> radii;
  for (int k = 0; k <= 16; ++k) radii.push_back(spec.r + (spec.R - spec.r) * k / 16.0);
  std::ofstream os(ctx.artifact("_profile.csv"));
  write_height_profile_csv(os, height_profile(spec, m, radii));
}

}  // namespace

const std::vector<std::string>& allowed_keys(const std::string& command) {
  static const std::vector<std::string> annulus = {"space", "reference", "graph", "r", "R", "eps", "h", "resolution",
                                                   "mesh", "spacing", "solver", "perturbation", "sample_radius",
                                                   "sweep", "monotone"};
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"verify", {"space", "suite", "n_points"}},
      {"mincurv", {"space", "samples"}},
      {"solve-graph", {"space", "domain", "boundary", "boundary_value", "solver", "refine", "second_start"}},
      {"plateau", annulus},
      {"sweep", annulus},
      {"areas", {"space", "reference", "graph", "r", "R", "eps", "h"}},
      {"maxprinciple", {"space", "reference", "graph", "r", "R", "eps", "h", "weights", "fields", "field_tol",
                        "inverse_coordinate"}},
  };
  return keys.at(command);
}

void run_verify(const Json& cfg, Context& ctx) {
  const SpaceId id = space_of(cfg);
  const std::string suite = json_string(cfg, "suite");
  if (suite != "geometry" && suite != "surfaces" && suite != "all")
    throw ConfigError("suite must be geometry, surfaces or all");
  const int n = json_int(cfg, "n_points");
  if (n < 1) throw ConfigError("n_points must be positive");
  if (suite != "surfaces") geometry_suite(id, n, seed_of(cfg), ctx.report);
  if (suite != "geometry") surface_suite(id, 32, ctx.report, ctx.report.results);
}

void run_mincurv(const Json& cfg, Context& ctx) {
  const int n = json_int(cfg, "samples");
  if (n < 1) throw ConfigError("samples must be positive");
  surface_suite(space_of(cfg), n, ctx.report, ctx.report.results);
}

void run_solve_graph(const Json& cfg, Context& ctx) {
  const SpaceId id = space_of(cfg);
  const GraphDomain d = domain_from_json(cfg.at("domain"));
  const BoundaryChoice bc = boundary_from_json(cfg, id);
  GraphSolveOptions opts;
  const Json& s = cfg.at("solver");
  if (s.contains("tol")) opts.tol = json_number(s, "tol");
  if (s.contains("max_iter")) opts.max_iter = json_int(s, "max_iter");
  GraphSolveReport sr;
  const GraphGrid g = solve_minimal_graph(d, id, bc.data, opts, nullptr, &sr);
  {
    std::ofstream os(ctx.artifact("_graph.csv"));
    write_graph_csv(os, g);
  }
  auto& res = ctx.report.results;
  res["iterations"] = sr.iterations;
  res["residual"] = sr.residual;
  res["residual_history"] = sr.residual_history;
  ctx.report.add("residual", sr.residual <= opts.tol, sr.residual, opts.tol);
  if (bc.exact) {
    const double e = max_error(g, *bc.exact);
    res["max_error"] = e;
    ctx.report.add("max_error", e <= 1e-3, e, 1e-3);
    if (json_bool(cfg, "refine")) {
      GraphDomain fine = d;
      fine.n_angular *= 2;
      fine.n_radial *= 2;
      const double ef = max_error(solve_minimal_graph(fine, id, bc.data, opts), *bc.exact);
      const double ratio = ef > 0 ? e / ef : std::numeric_limits<double>::infinity();
      res["max_error_refined"] = ef;
      ctx.report.add("refinement_ratio", ratio >= 3.0, ratio, 3.0);
    }
  } else if (json_bool(cfg, "refine")) {
    throw ConfigError("refine needs boundary data with a known exact solution");
  }
  if (json_bool(cfg, "second_start")) {
    std::vector<double> start = harmonic_extension(d, bc.data);
    const double rin = d.kind == GraphDomain::Kind::Annulus ? d.r : 0.0;
    for (int k = 0; k < d.num_nodes(); ++k) {
      if (d.is_boundary(k)) continue;
      const Vec2 p = d.node(k);
      const double t = d.kind == GraphDomain::Kind::Rectangle
                           ? std::sin(kPi * (p[0] - d.x0) / (d.x1 - d.x0)) * std::sin(kPi * (p[1] - d.y0) / (d.y1 - d.y0))
                           : std::sin(kPi * (p.norm() - rin) / (d.R - rin)) * std::cos(2 * std::atan2(p[1], p[0]));
      start[k] += 0.3 * t;
    }
    const GraphGrid v = solve_minimal_graph(d, id, bc.data, opts, &start);
    const double gap = graph_difference_report(g, v).max_interior_gap;
    res["second_start_gap"] = gap;
    ctx.report.add("second_start_gap", gap <= 2e-8, gap, 2e-8);
  }
}

void run_plateau(const Json& cfg, Context& ctx) {
  const RegionSpec spec = region_spec_from_json(cfg);
  const double sample_radius = sample_radius_of(cfg, spec);
  const MinimizeResult res = minimize_annulus(spec, cfg);
  write_obj(ctx.artifact("_mesh.obj"), res.mesh);
  write_profile(spec, res.mesh, ctx);
  Json& out = ctx.report.results;
  annulus_results(spec, res, sample_radius, out);

  const double lo = out["slab_min"].get<double>(), hi = out["slab_max"].get<double>();
  const double excursion = std::max(spec.h - lo, hi - spec.h - spec.eps);
  ctx.report.add("slab", excursion <= 1e-3, excursion, 1e-3);
  ctx.report.add("grad_norm", res.grad_norm <= 1e-6, res.grad_norm, 1e-6);
  const Json& pert = cfg.contains("perturbation") ? cfg["perturbation"] : Json::object();
  const int trials = pert.contains("trials") ? json_int(pert, "trials") : 100;
  const double delta = pert.contains("delta") ? json_number(pert, "delta") : 1e-3;
  const double drop = worst_perturbation_decrease(spec.space(), res.mesh, trials, delta, seed_of(cfg));
  out["perturbation_decrease"] = drop;
  ctx.report.add("perturbation", drop <= 1e-9, drop, 1e-9);
  ctx.report.add("is_graph", out["is_graph"].get<bool>(), out["min_normal_component"].get<double>(), 0.0);

  if (cfg.contains("monotone")) {
    const Json& mono = cfg["monotone"];
    if (!mono.is_object() || !mono.contains("Rs") || !mono["Rs"].is_array() || mono["Rs"].size() < 2)
      throw ConfigError("monotone needs an Rs array with at least two radii");
    std::vector<double> Rs;
    std::vector<TriMesh> meshes;
    for (const auto& x : mono["Rs"]) {
      if (!x.is_number()) throw ConfigError("monotone.Rs must hold numbers");
      Rs.push_back(x.get<double>());
      RegionSpec sR = spec;
      sR.R = Rs.back();
      if (!(sR.R > sample_radius)) throw ConfigError("every monotone radius must exceed sample_radius");
      meshes.push_back(minimize_annulus(sR, cfg).mesh);
    }
    const auto rep = slab_and_monotonicity_check(spec, meshes, Rs, sample_radius);
    Json entries = Json::array();
    double min_gap = 1e300;
    for (const auto& e : rep.entries) {
      entries.push_back(Json{{"R", e.R}, {"slab_min", e.slab_min}, {"slab_max", e.slab_max}, {"inner_gap", e.inner_gap}});
      min_gap = std::min(min_gap, e.inner_gap);
    }
    out["monotone"] = Json{{"sample_radius", sample_radius}, {"entries", entries},
                           {"worst_violation", rep.worst_monotone_violation}};
    ctx.report.add("monotone_heights", rep.monotone, rep.worst_monotone_violation, 1e-3);
    ctx.report.add("inner_gaps_positive", rep.gaps_positive, min_gap, 0.0);
  }
  if (cfg.contains("sweep")) sweep_stage(spec, res.mesh, cfg["sweep"], ctx, out);
}

void run_sweep(const Json& cfg, Context& ctx) {
  const RegionSpec spec = region_spec_from_json(cfg);
  const MinimizeResult res = minimize_annulus(spec, cfg);
  write_obj(ctx.artifact("_mesh.obj"), res.mesh);
  Json& out = ctx.report.results;
  annulus_results(spec, res, sample_radius_of(cfg, spec), out);
  sweep_stage(spec, res.mesh, cfg.contains("sweep") ? cfg["sweep"] : Json::object(), ctx, out);
}

void run_areas(const Json& cfg, Context& ctx) {
  const RegionSpec spec = region_spec_from_json(cfg);
  const DouglasAreas a = douglas_areas(spec);
  Json& out = ctx.report.results;
  out["area_lateral"] = a.area_lateral;
  out["area_disk_bottom"] = a.area_disk_bottom;
  out["area_disk_top"] = a.area_disk_top;
  out["inequality_holds"] = a.inequality_holds;
  std::optional<double> disk;
  if (spec.reference != RegionSpec::Reference::NilEntireGraph) disk = kPi * spec.r * spec.r;
  else if (spec.graph.name == "zero") disk = 2 * kPi * (4.0 / 3.0) * (std::pow(1 + spec.r * spec.r / 4, 1.5) - 1);
  if (disk) {
    out["area_disk_closed_form"] = *disk;
    const double eb = std::abs(a.area_disk_bottom - *disk), et = std::abs(a.area_disk_top - *disk);
    ctx.report.add("disk_bottom_closed_form", eb <= 1e-8, eb, 1e-8);
    ctx.report.add("disk_top_closed_form", et <= 1e-8, et, 1e-8);
  }
  ctx.report.add("inequality_holds", a.inequality_holds, a.area_disk_bottom + a.area_disk_top - a.area_lateral, 0.0);
}

void run_maxprinciple(const Json& cfg_in, Context& ctx) {
  Json cfg = cfg_in;
  if (space_of(cfg).space == Space::Nil3 && !cfg.contains("reference")) cfg["reference"] = "nil_vertical_plane";
  const RegionSpec spec = region_spec_from_json(cfg);
  const SpaceId id = spec.space();
  LaplacianWeights kind;
  try {
    kind = parse_laplacian_weights(json_string(cfg, "weights"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const int fields = json_int(cfg, "fields");
  const double field_tol = json_number(cfg, "field_tol");
  if (fields < 0) throw ConfigError("fields must be nonnegative");
  Json& out = ctx.report.results;

  const std::vector<TriMesh> meshes = {ruled_annulus_mesh(spec, 48, 12), isotropic_annulus_mesh(spec, 0.3)};
  std::mt19937_64 rng(seed_of(cfg));
  double worst_gap = -1e300, worst_lap = 1e300;
  bool all = true;
  for (int i = 0; i < fields; ++i) {
    const auto f = random_subharmonic_field(id, meshes[i % meshes.size()], kind, rng);
    const auto r = discrete_max_principle_check(id, f, kind, field_tol);
    all = all && r.passes();
    worst_gap = std::max(worst_gap, r.interior_max - r.boundary_sup);
    worst_lap = std::min(worst_lap, r.min_laplacian);
  }
  out["random_fields"] = Json{{"count", fields}, {"worst_interior_minus_boundary", worst_gap},
                              {"min_laplacian", worst_lap}};
  if (fields > 0) ctx.report.add("random_fields", all && worst_gap <= field_tol, worst_gap, field_tol);

  const Json& inv = cfg.at("inverse_coordinate");
  if (inv.contains("enabled") && json_bool(inv, "enabled")) {
    if (spec.reference == RegionSpec::Reference::NilEntireGraph)
      throw ConfigError("the inverse-coordinate check needs the Sol3 or Nil3 vertical-plane reference");
    MinimizeOptions o;
    if (inv.contains("grad_tol")) o.grad_tol = json_number(inv, "grad_tol");
    const double spacing = inv.contains("spacing") ? json_number(inv, "spacing") : 0.1;
    const double tol = inv.contains("tol") ? json_number(inv, "tol") : 1e-6;
    const MinimizeResult res = minimize_area(id, isotropic_annulus_mesh(spec, spacing), o);
    const int axis = graph_axis_coordinate(id.chart);
    const auto f = DiscreteSurfaceFunction::sample(res.mesh, SurfaceScalarField::inverse_coordinate(axis));
    const auto r = discrete_max_principle_check(id, f, kind, tol);
    write_obj(ctx.artifact("_mesh.obj"), res.mesh);
    {
      std::ofstream os(ctx.artifact("_values.csv"));
      write_vertex_csv(os, f.values);
    }
    out["inverse_coordinate"] = Json{{"status", to_string(r.status)},
                                     {"interior_max", r.interior_max},
                                     {"boundary_sup", r.boundary_sup},
                                     {"min_laplacian", r.min_laplacian},
                                     {"grad_norm", res.grad_norm}};
    ctx.report.add("inverse_coordinate_laplacian", r.min_laplacian >= -tol, r.min_laplacian, tol);
    ctx.report.add("inverse_coordinate", r.passes(), r.interior_max - r.boundary_sup, tol);
  }
}

}  // namespace homegeo::cli
