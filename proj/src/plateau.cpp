#include "homegeo/plateau.hpp"
#include "homegeo/surface.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace homegeo {

EntireGraph EntireGraph::zero() { return {}; }

EntireGraph EntireGraph::saddle() { return {"saddle", [](double x, double y) { return 0.5 * x * y; }}; }

EntireGraph EntireGraph::from_name(const std::string& name) {
  if (name == "zero") return zero();
  if (name == "saddle") return saddle();
  throw std::invalid_argument("unknown entire graph '" + name + "' (expected zero or saddle)");
}

RegionSpec RegionSpec::sol(double r, double R, double eps, double h) {
  RegionSpec s;
  s.reference = Reference::SolSpecialPlane;
  s.r = r;
  s.R = R;
  s.eps = eps;
  s.h = h;
  return s;
}

RegionSpec RegionSpec::nil_graph(double r, double R, double eps, EntireGraph g, double h) {
  RegionSpec s;
  s.reference = Reference::NilEntireGraph;
  s.graph = std::move(g);
  s.r = r;
  s.R = R;
  s.eps = eps;
  s.h = h;
  return s;
}

RegionSpec RegionSpec::nil_vertical(double r, double R, double eps, double h) {
  RegionSpec s;
  s.reference = Reference::NilVerticalPlane;
  s.r = r;
  s.R = R;
  s.eps = eps;
  s.h = h;
  return s;
}

SpaceId RegionSpec::space() const {
  switch (reference) {
    case Reference::SolSpecialPlane:
      return SpaceId::sol3();
    case Reference::NilVerticalPlane:
      return SpaceId::nil3_y();
    case Reference::NilEntireGraph:
      break;
  }
  return SpaceId::nil3();
}

void RegionSpec::validate() const {
  if (!(r > 0.0 && r < R)) throw std::invalid_argument("region needs 0 < r < R");
  if (!(eps >= 0.0) || !std::isfinite(eps) || !std::isfinite(h)) throw std::invalid_argument("region needs eps >= 0");
  if (reference == Reference::NilEntireGraph) {
    if (!graph.f) throw std::invalid_argument("entire graph has no formula");
    ParamSurface s;
    s.eval = [this](double u, double v) { return Vec3(u, v, graph.f(u, v)); };
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < 5; ++k) {
        const double u = -R + 2.0 * R * i / 4.0, v = -R + 2.0 * R * k / 4.0;
        if (std::abs(mean_curvature_at(SpaceId::nil3(), s, u, v)) > 1e-6)
          throw std::invalid_argument("reference graph '" + graph.name + "' is not minimal");
      }
  }
}

Vec3 RegionSpec::lift(double a, double b, double t) const {
  switch (reference) {
    case Reference::SolSpecialPlane:
      return {a, b, t};
    case Reference::NilVerticalPlane:
      return {t, a, b};
    case Reference::NilEntireGraph:
      break;
  }
  return {a, b, graph.f(a, b) + t};
}

Vec3 RegionSpec::region_coords(const Vec3& x) const {
  switch (reference) {
    case Reference::SolSpecialPlane:
      return x;
    case Reference::NilVerticalPlane:
      return {x[1], x[2], x[0]};
    case Reference::NilEntireGraph:
      break;
  }
  return {x[0], x[1], x[2] - graph.f(x[0], x[1])};
}

int RegionSpec::graph_frame_axis() const { return reference == Reference::NilVerticalPlane ? 0 : 2; }

std::string to_string(RegionSpec::Reference r) {
  switch (r) {
    case RegionSpec::Reference::SolSpecialPlane:
      return "sol_special_plane";
    case RegionSpec::Reference::NilVerticalPlane:
      return "nil_vertical_plane";
    case RegionSpec::Reference::NilEntireGraph:
      break;
  }
  return "nil_entire_graph";
}

RegionSpec::Reference parse_reference(const std::string& name) {
  if (name == "sol_special_plane") return RegionSpec::Reference::SolSpecialPlane;
  if (name == "nil_vertical_plane") return RegionSpec::Reference::NilVerticalPlane;
  if (name == "nil_entire_graph") return RegionSpec::Reference::NilEntireGraph;
  throw std::invalid_argument("unknown reference '" + name + "'");
}

BoundaryCurves boundary_curves(const RegionSpec& spec, int resolution) {
  spec.validate();
  if (resolution < 16) throw std::invalid_argument("polyline resolution must be at least 16");
  BoundaryCurves c;
  for (int i = 0; i < resolution; ++i) {
    const double th = 2.0 * std::numbers::pi * i / resolution;
    const double ct = std::cos(th), st = std::sin(th);
    c.inner.push_back(spec.lift(spec.r * ct, spec.r * st, spec.h + spec.eps));
    c.outer.push_back(spec.lift(spec.R * ct, spec.R * st, spec.h));
  }
  return c;
}

namespace {

void add_quad(TriMesh& m, int v00, int v10, int v01, int v11, bool flip) {
  if (flip) {
    m.triangles.push_back({v00, v01, v10});
    m.triangles.push_back({v01, v11, v10});
  } else {
    m.triangles.push_back({v00, v01, v11});
    m.triangles.push_back({v00, v11, v10});
  }
}

}  // namespace

TriMesh ruled_annulus_mesh(const BoundaryCurves& curves, Chart chart, int n_radial, double grading) {
  const int n = static_cast<int>(curves.inner.size());
  if (n < 3 || static_cast<int>(curves.outer.size()) != n)
    throw std::invalid_argument("ruled mesh needs two polylines with the same number of points");
  if (n_radial < 2) throw std::invalid_argument("ruled mesh needs at least two rings");
  if (!(grading > 0.0)) throw std::invalid_argument("grading must be positive");
  TriMesh m;
  m.chart = chart;
  for (int j = 0; j < n_radial; ++j) {
    const double s = static_cast<double>(j) / (n_radial - 1);
    const double tau = std::abs(grading - 1.0) < 1e-12 ? s : (std::pow(grading, s) - 1.0) / (grading - 1.0);
    for (int i = 0; i < n; ++i) m.vertices.push_back((1.0 - tau) * curves.inner[i] + tau * curves.outer[i]);
  }
  for (int j = 0; j + 1 < n_radial; ++j)
    for (int i = 0; i < n; ++i) {
      const int i1 = (i + 1) % n;
      add_quad(m, j * n + i, j * n + i1, (j + 1) * n + i, (j + 1) * n + i1, (i + j) % 2 == 1);
    }
  m.rebuild_boundary();
  return m;
}

TriMesh ruled_annulus_mesh(const RegionSpec& spec, int n_angular, int n_radial) {
  return ruled_annulus_mesh(boundary_curves(spec, n_angular), spec.space().chart, n_radial, spec.R / spec.r);
}

TriMesh reference_patch_mesh(const RegionSpec& spec, double t, double rho_in, double rho_out, int n_angular,
                             int n_radial) {
  if (!(rho_in >= 0.0 && rho_out > rho_in)) throw std::invalid_argument("patch needs 0 <= rho_in < rho_out");
  if (n_angular < 3 || n_radial < 2) throw std::invalid_argument("patch resolution too small");
  TriMesh m;
  m.chart = spec.space().chart;
  const bool disk = rho_in == 0.0;
  const int first = disk ? 1 : 0;
  if (disk) m.vertices.push_back(spec.lift(0.0, 0.0, t));
  for (int j = first; j < n_radial; ++j) {
    const double rho = rho_in + (rho_out - rho_in) * j / (n_radial - 1);
    for (int i = 0; i < n_angular; ++i) {
      const double th = 2.0 * std::numbers::pi * i / n_angular;
      m.vertices.push_back(spec.lift(rho * std::cos(th), rho * std::sin(th), t));
    }
  }
  auto idx = [&](int j, int i) { return (disk ? 1 : 0) + (j - first) * n_angular + (i % n_angular); };
  if (disk)
    for (int i = 0; i < n_angular; ++i) m.triangles.push_back({0, idx(1, i), idx(1, i + 1)});
  for (int j = first; j + 1 < n_radial; ++j)
    for (int i = 0; i < n_angular; ++i)
      add_quad(m, idx(j, i), idx(j, i + 1), idx(j + 1, i), idx(j + 1, i + 1), (i + j) % 2 == 1);
  m.rebuild_boundary();
  return m;
}

DouglasAreas douglas_areas(const RegionSpec& spec) {
  spec.validate();
  using boost::math::quadrature::gauss_kronrod;
  const SpaceId id = spec.space();
  const double two_pi = 2.0 * std::numbers::pi;
  constexpr double tol = 1e-12;
  auto area_form = [&](const std::function<Vec3(double, double)>& X, double u, double v) {
    ParamSurface s;
    s.eval = X;
    const SurfaceJet j = jet_at(s, u, v);
    const Mat3 g = metric(id, j.x);
    return std::sqrt(std::max(0.0, j.xu.dot(g * j.xu) * j.xv.dot(g * j.xv) - std::pow(j.xu.dot(g * j.xv), 2)));
  };
  auto integrate2 = [&](const std::function<Vec3(double, double)>& X, double u0, double u1, double v0, double v1) {
    if (u1 <= u0 || v1 <= v0) return 0.0;
    return gauss_kronrod<double, 31>::integrate(
        [&](double u) {
          return gauss_kronrod<double, 31>::integrate([&](double v) { return area_form(X, u, v); }, v0, v1, 8, tol);
        },
        u0, u1, 8, tol);
  };
  DouglasAreas out;
  const double lo = spec.h, hi = spec.h + spec.eps;
  out.area_lateral = integrate2(
      [&](double th, double t) { return spec.lift(spec.r * std::cos(th), spec.r * std::sin(th), t); }, 0.0, two_pi,
      lo, hi);
  auto disk = [&](double level) {
    return integrate2(
        [&](double rho, double th) { return spec.lift(rho * std::cos(th), rho * std::sin(th), level); }, 0.0,
        spec.r, 0.0, two_pi);
  };
  out.area_disk_bottom = disk(lo);
  out.area_disk_top = disk(hi);
  out.inequality_holds = out.area_lateral < out.area_disk_bottom + out.area_disk_top;
  return out;
}

namespace {

// Barycentric coordinates of p in the 2D triangle (a, b, c).
Vec3 barycentric(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  const double det = (b[1] - c[1]) * (a[0] - c[0]) + (c[0] - b[0]) * (a[1] - c[1]);
  const double l0 = ((b[1] - c[1]) * (p[0] - c[0]) + (c[0] - b[0]) * (p[1] - c[1])) / det;
  const double l1 = ((c[1] - a[1]) * (p[0] - c[0]) + (a[0] - c[0]) * (p[1] - c[1])) / det;
  return {l0, l1, 1.0 - l0 - l1};
}

}  // namespace

std::optional<double> height_over(const RegionSpec& spec, const TriMesh& m, double a, double b) {
  const Vec2 p(a, b);
  for (const auto& t : m.triangles) {
    Vec3 rc[3];
    for (int k = 0; k < 3; ++k) rc[k] = spec.region_coords(m.vertices[t[k]]);
    const Vec3 l = barycentric(p, rc[0].head<2>(), rc[1].head<2>(), rc[2].head<2>());
    if (l.minCoeff() >= -1e-12) return l[0] * rc[0][2] + l[1] * rc[1][2] + l[2] * rc[2][2];
  }
  return std::nullopt;
}

std::vector<HeightProfileRow> height_profile(const RegionSpec& spec, const TriMesh& m,
                                             const std::vector<double>& radii, int n_samples) {
  std::vector<HeightProfileRow> rows;
  for (double rho : radii) {
    HeightProfileRow row{rho, 0.0, 1e300, -1e300};
    int count = 0;
    for (int i = 0; i < n_samples; ++i) {
      const double th = 2.0 * std::numbers::pi * i / n_samples;
      const auto hgt = height_over(spec, m, rho * std::cos(th), rho * std::sin(th));
      if (!hgt) continue;
      row.mean += *hgt;
      row.min = std::min(row.min, *hgt);
      row.max = std::max(row.max, *hgt);
      ++count;
    }
    if (count == 0) continue;
    row.mean /= count;
    rows.push_back(row);
  }
  return rows;
}

SlabReport slab_and_monotonicity_check(const RegionSpec& spec, const std::vector<TriMesh>& meshes,
                                       const std::vector<double>& Rs, double sample_radius, double slab_tol,
                                       double monotone_tol, int n_samples) {
  if (meshes.size() != Rs.size() || meshes.empty()) throw std::invalid_argument("one outer radius per mesh");
  for (std::size_t i = 1; i < Rs.size(); ++i)
    if (!(Rs[i] > Rs[i - 1])) throw std::invalid_argument("outer radii must increase");
  SlabReport rep;
  rep.all_in_slab = true;
  rep.gaps_positive = true;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const TriMesh& m = meshes[i];
    if (m.chart != spec.space().chart) throw std::invalid_argument("mesh chart does not match the spec");
    if (m.boundary_loops.size() != 2) throw std::invalid_argument("mesh is not an annulus");
    SlabReport::Entry e;
    e.R = Rs[i];
    e.slab_min = 1e300;
    e.slab_max = -1e300;
    bool inner_found = false, outer_found = false;
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
      const Vec3 rc = spec.region_coords(m.vertices[v]);
      e.slab_min = std::min(e.slab_min, rc[2]);
      e.slab_max = std::max(e.slab_max, rc[2]);
      const double rho = rc.head<2>().norm();
      if (m.boundary[v] && std::abs(rho - spec.r) < 1e-9 && std::abs(rc[2] - spec.h - spec.eps) < 1e-9)
        inner_found = true;
      if (m.boundary[v] && std::abs(rho - Rs[i]) < 1e-9 && std::abs(rc[2] - spec.h) < 1e-9) outer_found = true;
    }
    if (!inner_found || !outer_found) throw std::invalid_argument("mesh boundary does not match the spec circles");
    e.in_slab = e.slab_min >= spec.h - slab_tol && e.slab_max <= spec.h + spec.eps + slab_tol;
    for (int k = 0; k < n_samples; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n_samples;
      const auto hgt = height_over(spec, m, sample_radius * std::cos(th), sample_radius * std::sin(th));
      if (!hgt) throw std::invalid_argument("sample radius is not covered by every mesh");
      e.samples.push_back(*hgt);
    }
    e.inner_gap = *std::min_element(e.samples.begin(), e.samples.end()) - spec.h;
    rep.all_in_slab = rep.all_in_slab && e.in_slab;
    rep.gaps_positive = rep.gaps_positive && e.inner_gap > 0.0;
    rep.entries.push_back(std::move(e));
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    for (int k = 0; k < n_samples; ++k) {
      const double drop = rep.entries[i - 1].samples[k] - rep.entries[i].samples[k];
      rep.worst_monotone_violation = std::max(rep.worst_monotone_violation, drop);
    }
  rep.monotone = rep.worst_monotone_violation <= monotone_tol;
  return rep;
}

GraphnessReport graphness_check(const SpaceId& id, const TriMesh& m, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("frame axis must be 0..2");
  if (m.chart != id.chart) throw std::invalid_argument("mesh chart does not match space chart");
  m.validate();
  // Consistent orientation: every directed edge appears at most once.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k)
      if (++directed[{t[k], t[(k + 1) % 3]}] > 1) throw InvalidMesh("mesh is not consistently oriented");

  std::vector<double> comp;
  int positive = 0;
  for (const auto& t : m.triangles) {
    const Vec3 centroid = (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) / 3.0;
    const Mat3 c = coframe(id, centroid);
    Vec3 n = (c * (m.vertices[t[1]] - m.vertices[t[0]])).cross(c * (m.vertices[t[2]] - m.vertices[t[0]]));
    n.normalize();
    comp.push_back(n[axis]);
    positive += n[axis] > 0.0;
  }
  const double sign = 2 * positive >= static_cast<int>(comp.size()) ? 1.0 : -1.0;
  GraphnessReport rep;
  rep.min_normal_component = comp.empty() ? 0.0 : 1e300;
  for (double x : comp) rep.min_normal_component = std::min(rep.min_normal_component, sign * x);

  // Projection along the coordinate matching the frame axis: E3 is d/dx3 (or
  // d/ds) and E1 in the NilY chart is d/dy1.
  const int drop = axis == 0 ? 0 : 2;
  auto project = [&](const Vec3& x) {
    Vec2 p;
    for (int k = 0, o = 0; k < 3; ++k)
      if (k != drop) p[o++] = x[k];
    return p;
  };
  const int nt = static_cast<int>(m.triangles.size());
  std::vector<std::array<Vec2, 3>> tri2(nt);
  Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
  for (int t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k) {
      tri2[t][k] = project(m.vertices[m.triangles[t][k]]);
      lo = lo.cwiseMin(tri2[t][k]);
      hi = hi.cwiseMax(tri2[t][k]);
    }
  const int cells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(nt))));
  const Vec2 size = (hi - lo).cwiseMax(Vec2(1e-12, 1e-12)) / cells;
  auto cell_of = [&](const Vec2& p) {
    const int cx = std::clamp(static_cast<int>((p[0] - lo[0]) / size[0]), 0, cells - 1);
    const int cy = std::clamp(static_cast<int>((p[1] - lo[1]) / size[1]), 0, cells - 1);
    return std::pair{cx, cy};
  };
  std::vector<std::vector<int>> bucket(cells * cells);
  for (int t = 0; t < nt; ++t) {
    Vec2 a = tri2[t][0].cwiseMin(tri2[t][1]).cwiseMin(tri2[t][2]);
    Vec2 b = tri2[t][0].cwiseMax(tri2[t][1]).cwiseMax(tri2[t][2]);
    const auto [x0, y0] = cell_of(a);
    const auto [x1, y1] = cell_of(b);
    for (int x = x0; x <= x1; ++x)
      for (int y = y0; y <= y1; ++y) bucket[y * cells + x].push_back(t);
  }
  rep.projection_injective = true;
  const Vec3 probes[] = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}};
  for (int t = 0; t < nt && rep.projection_injective; ++t)
    for (const Vec3& w : probes) {
      const Vec2 p = w[0] * tri2[t][0] + w[1] * tri2[t][1] + w[2] * tri2[t][2];
      const auto [cx, cy] = cell_of(p);
      int covering = 0;
      for (int other : bucket[cy * cells + cx]) {
        const Vec3 l = barycentric(p, tri2[other][0], tri2[other][1], tri2[other][2]);
        if (std::isfinite(l[0]) && l.minCoeff() > 1e-9) ++covering;
      }
      if (covering != 1) {
        rep.projection_injective = false;
        break;
      }
    }
  rep.is_graph = rep.min_normal_component > 0.0 && rep.projection_injective;
  return rep;
}

}  // namespace homegeo
