// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "homegeo/graph.hpp"
#include "homegeo/maxprinciple.hpp"
#include "homegeo/named_surfaces.hpp"
#include "homegeo/plateau.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace homegeo;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s criterion %2d: %s | %s | %.1f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), dt, limit_s, in_time ? "" : " TIMEOUT");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

template <class F>
void grid(const ParamSurface& s, int n, F&& f) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      f(s.u0 + (i + 0.5) * (s.u1 - s.u0) / n, s.v0 + (j + 0.5) * (s.v1 - s.v0) / n);
}

double graph_error(const GraphGrid& g, const DirichletData& exact) {
  double e = 0.0;
  for (int k = 0; k < g.domain.num_nodes(); ++k) {
    const Vec2 p = g.domain.node(k);
    e = std::max(e, std::abs(g.heights[k] - exact(p[0], p[1])));
  }
  return e;
}

// Heights of all vertices over the reference, relative to the slab [h, h + eps].
std::pair<double, double> vertex_height_range(const RegionSpec& spec, const TriMesh& m) {
  double lo = 1e300, hi = -1e300;
  for (const Vec3& v : m.vertices) {
    const double z = spec.height(v);
    lo = std::min(lo, z);
    hi = std::max(hi, z);
  }
  return {lo, hi};
}

}  // namespace

int main() {
  criterion(1, "frame connection tables vs finite-difference Christoffel symbols", 5, [] {
    double worst = 0.0;
    for (const SpaceId& id : {SpaceId::sol3(), SpaceId::nil3()}) {
      std::mt19937_64 rng(42);
      for (int n = 0; n < 100; ++n) {
        const Vec3 x = oracle::random_point(rng);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            worst = std::max(worst, (oracle::frame_connection_fd(id, x, i, j) -
                                     frame_connection(id.space, Vec3::Unit(i), Vec3::Unit(j)))
                                        .cwiseAbs()
                                        .maxCoeff());
      }
    }
    return Outcome{worst <= 1e-6, fmt("max deviation %.3g (tol 1e-6)", worst)};
  });

  criterion(2, "mean curvature of the minimal catalogue on 32x32 samples", 30, [] {
    double worst = 0.0;
    int surfaces_checked = 0;
    for (const auto& named : surfaces::minimal_catalogue()) {
      ++surfaces_checked;
      grid(named.surface, 32, [&](double u, double v) {
        worst = std::max(worst, std::abs(mean_curvature_at(named.space, named.surface, u, v)));
      });
    }
    return Outcome{worst <= 1e-4 && surfaces_checked == 10,
                   fmt("%.0f surfaces, max |H| %.3g (tol 1e-4)", surfaces_checked, worst)};
  });

  criterion(3, "totally geodesic coordinate planes vs special and vertical planes", 10, [] {
    const SpaceId sol = SpaceId::sol3(), nil = SpaceId::nil3();
    double tg = 0.0, special = 0.0, vertical = 0.0;
    for (int j : {1, 2})
      for (double t : {-1.0, 0.0, 0.7}) {
        const auto s = surfaces::sol_coordinate_plane(j, t);
        grid(s, 32, [&](double u, double v) { tg = std::max(tg, second_fundamental_norm_at(sol, s, u, v)); });
      }
    for (double t : {0.0, 1.0, 2.0}) {
      const auto s = surfaces::sol_special_plane(t);
      grid(s, 32, [&](double u, double v) {
        special = std::max(special, std::abs(second_fundamental_norm_at(sol, s, u, v) - std::sqrt(2.0)));
      });
    }
    for (const auto& s : {surfaces::nil_vertical_plane({0, 0}, {1, 0}), surfaces::nil_vertical_plane({1, 0}, {-1, 1})})
      grid(s, 32, [&](double u, double v) {
        vertical = std::max(vertical, std::abs(second_fundamental_norm_at(nil, s, u, v) - 1.0 / std::sqrt(2.0)));
      });
    return Outcome{tg <= 1e-4 && special <= 1e-3 && vertical <= 1e-3,
                   fmt("coordinate |II| %.3g, special |II|-sqrt2 %.3g, vertical |II|-1/sqrt2 %.3g", tg, special,
                       vertical)};
  });

  criterion(4, "1/s and 1/y1 are subharmonic, strictly somewhere", 60, [] {
    const SpaceId sol = SpaceId::sol3();
    const auto inv_s = SurfaceScalarField::inverse_coordinate(2);
    double lo_s = 1e300, hi_s = -1e300;
    for (double t : {1.0, 2.0}) {
      const auto s = surfaces::sol_special_plane(t);
      grid(s, 32, [&](double u, double v) { lo_s = std::min(lo_s, laplace_beltrami_at(sol, s, inv_s, u, v)); });
    }
    for (double a : {0.5, 1.0, 2.0}) {
      const auto s = surfaces::sol_exponential(a, 0.05, 2.0);
      grid(s, 32, [&](double u, double v) {
        const double lap = laplace_beltrami_at(sol, s, inv_s, u, v);
        lo_s = std::min(lo_s, lap);
        hi_s = std::max(hi_s, lap);
      });
    }
    // Nil graphs over rectangles inside 0 < y1 = x1 <= 4.
    const auto inv_y1 = SurfaceScalarField::inverse_coordinate(0);
    double lo_y = 1e300, hi_y = -1e300;
    const std::vector<DirichletData> data = {
        [](double x, double y) { return 0.3 * x * y - 0.2 * y * y + 0.1 * std::sin(3 * x); },
        [](double x, double y) { return 0.5 * x * y; },
        [](double x, double y) { return 0.2 * std::cos(2 * y) * x; }};
    for (const auto& [x0, x1] : {std::pair{0.5, 2.5}, std::pair{2.0, 4.0}})
      for (const auto& f : data) {
        const auto d = GraphDomain::rectangle(x0, x1, -1, 1, 40, 40);
        const auto g = solve_minimal_graph(d, SpaceId::nil3(), f);
        for (int k : d.interior_nodes()) {
          const double lap = graph_laplace_beltrami(g, k, inv_y1);
          lo_y = std::min(lo_y, lap);
          hi_y = std::max(hi_y, lap);
        }
      }
    return Outcome{lo_s >= -1e-8 && lo_y >= -1e-8 && hi_s > 1e-4 && hi_y > 1e-4,
                   fmt("min Lap(1/s) %.3g, max %.3g; min Lap(1/y1) %.3g, max %.3g", lo_s, hi_s, lo_y, hi_y)};
  });

  criterion(5, "graph solver recovers x1 x2 / 2 on the annulus, refinement gain >= 3", 120, [] {
    const DirichletData saddle = [](double x, double y) { return 0.5 * x * y; };
    const double e64 = graph_error(solve_minimal_graph(GraphDomain::annulus(1, 3, 64, 64), SpaceId::nil3(), saddle), saddle);
    const double e128 =
        graph_error(solve_minimal_graph(GraphDomain::annulus(1, 3, 128, 128), SpaceId::nil3(), saddle), saddle);
    return Outcome{e64 <= 1e-3 && e64 / e128 >= 3.0,
                   fmt("max error 64x64 %.3g, 128x128 %.3g, ratio %.1f", e64, e128, e64 / e128)};
  });

  criterion(6, "two initializations with equal boundary data agree", 120, [] {
    const auto d = GraphDomain::annulus(1, 3, 64, 64);
    const DirichletData f = [](double x, double y) { return 0.5 * x * y + 0.2 * std::cos(3 * std::atan2(y, x)); };
    const GraphGrid u = solve_minimal_graph(d, SpaceId::nil3(), f);
    std::vector<double> start = harmonic_extension(d, f);
    for (int k = 0; k < d.num_nodes(); ++k) {
      if (d.is_boundary(k)) continue;
      const Vec2 p = d.node(k);
      start[k] += 0.5 * std::sin(kPi * (p.norm() - 1.0) / 2.0) * std::cos(2 * std::atan2(p[1], p[0]));
    }
    GraphSolveOptions opts;
    const GraphGrid v = solve_minimal_graph(d, SpaceId::nil3(), f, opts, &start);
    const double gap = graph_difference_report(u, v).max_interior_gap;
    return Outcome{gap <= 2e-8, fmt("max interior gap %.3g (tol 2e-8)", gap)};
  });

  criterion(7, "Douglas areas: disks equal pi, inequality holds for eps 0.1 and fails for eps 1.6", 10, [] {
    const DouglasAreas a = douglas_areas(RegionSpec::sol(1.0, 4.0, 0.1));
    const double disk_err = std::max(std::abs(a.area_disk_bottom - kPi), std::abs(a.area_disk_top - kPi));
    // Independent oracle: lateral area of the straight cylinder by Simpson quadrature.
    const double lateral = oracle::adaptive_simpson(
        [](double s) {
          return oracle::adaptive_simpson(
              [s](double th) {
                return std::sqrt(std::exp(2 * s) * std::sin(th) * std::sin(th) +
                                 std::exp(-2 * s) * std::cos(th) * std::cos(th));
              },
              0, 2 * kPi, 1e-12);
        },
        1.0, 1.1, 1e-11);
    const DouglasAreas big = douglas_areas(RegionSpec::sol(0.05, 4.0, 1.6));
    const bool ok = disk_err <= 1e-8 && std::abs(a.area_lateral - lateral) <= 1e-8 && a.inequality_holds &&
                    a.area_lateral < a.area_disk_bottom + a.area_disk_top && !big.inequality_holds;
    return Outcome{ok, fmt("disk error %.3g, lateral %.6f vs oracle %.6f, large-eps margin %.3g", disk_err,
                           a.area_lateral, lateral, big.area_disk_bottom + big.area_disk_top - big.area_lateral)};
  });

  criterion(8, "minimized annuli stay in the slab, are critical and locally least area", 600, [] {
    std::ostringstream os;
    bool ok = true;
    const auto one = [&](const RegionSpec& spec, const char* label) {
      const MinimizeResult res = minimize_area_annulus(spec.space(), boundary_curves(spec, 64), std::nullopt, {});
      const auto [lo, hi] = vertex_height_range(spec, res.mesh);
      const double drop = worst_perturbation_decrease(spec.space(), res.mesh, 100, 1e-3, 42);
      const auto graph = graphness_check(spec.space(), res.mesh, spec.graph_frame_axis());
      const bool here = lo >= spec.h - 1e-3 && hi <= spec.h + spec.eps + 1e-3 && res.grad_norm <= 1e-6 &&
                        drop <= 1e-9 && graph.is_graph;
      ok = ok && here;
      os << label << fmt(" heights [%.6f, %.6f] grad %.2g drop %.2g", lo, hi, res.grad_norm, drop)
         << (graph.is_graph ? " graph" : " NOT graph") << "; ";
    };
    one(RegionSpec::sol(1.0, 4.0, 0.1, 1.0), "sol3");
    one(RegionSpec::nil_graph(1.0, 4.0, 0.1, EntireGraph::zero(), 1.0), "nil3");
    return Outcome{ok, os.str()};
  });

  criterion(9, "heights at radius 1.5 are non-decreasing in R and stay above h", 900, [] {
    const std::vector<double> Rs = {2.0, 3.0, 4.0};
    std::vector<TriMesh> meshes;
    for (double R : Rs) {
      const RegionSpec spec = RegionSpec::sol(1.0, R, 0.1);
      meshes.push_back(minimize_area_annulus(spec.space(), boundary_curves(spec, 64), std::nullopt, {}).mesh);
    }
    const auto rep = slab_and_monotonicity_check(RegionSpec::sol(1.0, 4.0, 0.1), meshes, Rs, 1.5);
    std::ostringstream os;
    os << "inner gaps";
    double min_gap = 1e300;
    for (const auto& e : rep.entries) {
      os << fmt(" %.4g", e.inner_gap);
      min_gap = std::min(min_gap, e.inner_gap);
    }
    os << fmt(", worst monotone violation %.3g", rep.worst_monotone_violation);
    return Outcome{rep.monotone && rep.gaps_positive && min_gap > 0.0, os.str()};
  });

  criterion(10, "sweep against the truncated plane s = 1.05 finds an interior contact", 300, [] {
    const RegionSpec spec = RegionSpec::sol(1.0, 4.0, 0.1);
    const MinimizeResult res = minimize_area_annulus(spec.space(), boundary_curves(spec, 64), std::nullopt, {});
    const TriMesh plane = reference_patch_mesh(spec, 1.05, 1.2, 5.0, 128, 40);
    const SweepResult r = sweep_contact(spec.space(), res.mesh, plane, SweepFamily::for_spec(spec, 0.1));
    const bool ok = r.contact_kind == SweepResult::Kind::Interior && r.c_star > 0.0 && r.c_star < 0.1 &&
                    r.disjoint_beyond_range;
    return Outcome{ok, "kind " + to_string(r.contact_kind) +
                           fmt(", c* %.6f, boundary distance %.3g, disjoint beyond range %.0f", r.c_star,
                               r.boundary_distance, r.disjoint_beyond_range ? 1.0 : 0.0)};
  });

  criterion(11, "discrete maximum principle on random fields and on 1/s", 60, [] {
    const RegionSpec spec = RegionSpec::sol(1.0, 4.0, 0.1);
    const SpaceId id = spec.space();
    const std::vector<TriMesh> meshes = {ruled_annulus_mesh(spec, 48, 12), isotropic_annulus_mesh(spec, 0.3)};
    std::mt19937_64 rng(42);
    bool fields_ok = true;
    double worst = -1e300;
    for (int i = 0; i < 50; ++i) {
      const auto kind = i % 2 ? LaplacianWeights::IntrinsicDelaunay : LaplacianWeights::ClampedCotan;
      const auto f = random_subharmonic_field(id, meshes[i % 2], kind, rng);
      const auto r = discrete_max_principle_check(id, f, kind, 1e-10);
      fields_ok = fields_ok && r.passes();
      worst = std::max(worst, r.interior_max - r.boundary_sup);
    }
    MinimizeOptions o;
    o.grad_tol = 1e-8;
    const MinimizeResult res = minimize_area(id, isotropic_annulus_mesh(spec, 0.1), o);
    const auto f = DiscreteSurfaceFunction::sample(res.mesh, SurfaceScalarField::inverse_coordinate(2));
    const auto r = discrete_max_principle_check(id, f, LaplacianWeights::IntrinsicDelaunay, 1e-6);
    return Outcome{fields_ok && worst <= 1e-10 && r.passes(),
                   fmt("random fields worst max-sup %.3g; 1/s: min Lap %.3g, max-sup %.3g", worst, r.min_laplacian,
                       r.interior_max - r.boundary_sup) +
                       " status " + to_string(r.status)};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
