#include "homegeo/plateau.hpp"

#include <boost/polygon/voronoi.hpp>

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homegeo {

namespace {

// Induced metric of the level-t reference surface at region point (a, b).
Mat2 induced_metric(const RegionSpec& spec, double a, double b, double t) {
  const double d = 1e-6;
  const Vec3 x = spec.lift(a, b, t);
  const Vec3 ea = (spec.lift(a + d, b, t) - spec.lift(a - d, b, t)) / (2 * d);
  const Vec3 eb = (spec.lift(a, b + d, t) - spec.lift(a, b - d, t)) / (2 * d);
  const Mat3 g = metric(spec.space(), x);
  Mat2 m;
  m << ea.dot(g * ea), ea.dot(g * eb), eb.dot(g * ea), eb.dot(g * eb);
  return m;
}

Polyline circle_by_arclength(const RegionSpec& spec, double rho, double t, double spacing) {
  const SpaceId id = spec.space();
  const int dense = 8192;
  std::vector<double> theta(dense + 1), len(dense + 1, 0.0);
  for (int i = 0; i <= dense; ++i) theta[i] = 2.0 * std::numbers::pi * i / dense;
  auto at = [&](double th) { return spec.lift(rho * std::cos(th), rho * std::sin(th), t); };
  for (int i = 1; i <= dense; ++i) {
    const Vec3 p = at(theta[i - 1]), q = at(theta[i]);
    const Vec3 e = q - p;
    len[i] = len[i - 1] + std::sqrt(e.dot(metric(id, 0.5 * (p + q)) * e));
  }
  const int n = std::max(16, static_cast<int>(std::ceil(len[dense] / spacing)));
  Polyline out;
  int j = 0;
  for (int k = 0; k < n; ++k) {
    const double target = len[dense] * k / n;
    while (len[j + 1] < target) ++j;
    const double w = (target - len[j]) / (len[j + 1] - len[j]);
    out.push_back(at(theta[j] + w * (theta[j + 1] - theta[j])));
  }
  return out;
}

}  // namespace

BoundaryCurves boundary_curves_by_spacing(const RegionSpec& spec, double spacing) {
  spec.validate();
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  return {circle_by_arclength(spec, spec.r, spec.h + spec.eps, spacing),
          circle_by_arclength(spec, spec.R, spec.h, spacing)};
}

TriMesh isotropic_annulus_mesh(const RegionSpec& spec, double spacing) {
  const BoundaryCurves curves = boundary_curves_by_spacing(spec, spacing);
  // u = L^T (a, b) turns the mid-level induced metric at the centre into the Euclidean one.
  const Mat2 M = induced_metric(spec, 0.0, 0.0, spec.h + 0.5 * spec.eps);
  const Mat2 Lt = Eigen::LLT<Mat2>(M).matrixU();
  const Mat2 Lt_inv = Lt.inverse();

  std::vector<Vec2> ab;  // region coordinates
  for (const Vec3& x : curves.inner) ab.push_back(spec.region_coords(x).head<2>());
  for (const Vec3& x : curves.outer) ab.push_back(spec.region_coords(x).head<2>());
  const std::size_t n_boundary = ab.size();
  std::vector<Vec2> flat;
  for (const Vec2& p : ab) flat.push_back(Lt * p);

  Vec2 lo = flat[0], hi = flat[0];
  for (const Vec2& u : flat) {
    lo = lo.cwiseMin(u);
    hi = hi.cwiseMax(u);
  }
  const double dy = spacing * std::sqrt(3.0) / 2.0;
  const double clearance = 0.75 * spacing;
  for (int row = 0; lo.y() + row * dy <= hi.y(); ++row)
    for (double x = lo.x() + (row % 2 ? 0.5 * spacing : 0.0); x <= hi.x(); x += spacing) {
      const Vec2 u(x, lo.y() + row * dy);
      const Vec2 p = Lt_inv * u;
      const double rho = p.norm();
      if (rho <= spec.r || rho >= spec.R) continue;
      bool clear = true;
      for (std::size_t k = 0; k < n_boundary && clear; ++k) clear = (flat[k] - u).squaredNorm() > clearance * clearance;
      if (!clear) continue;
      ab.push_back(p);
      flat.push_back(u);
    }

  double extent = 0.0;
  for (const Vec2& u : flat) extent = std::max(extent, u.cwiseAbs().maxCoeff());
  const double scale = 1e8 / extent;
  std::vector<boost::polygon::point_data<int>> sites;
  for (const Vec2& u : flat)
    sites.emplace_back(static_cast<int>(std::lround(u.x() * scale)), static_cast<int>(std::lround(u.y() * scale)));
  boost::polygon::voronoi_diagram<double> vd;
  boost::polygon::construct_voronoi(sites.begin(), sites.end(), &vd);

  TriMesh m;
  m.chart = spec.space().chart;
  const double log_ratio = std::log(spec.R / spec.r);
  for (std::size_t k = 0; k < ab.size(); ++k) {
    double t = spec.h + spec.eps * std::log(spec.R / ab[k].norm()) / log_ratio;
    if (k < curves.inner.size()) t = spec.h + spec.eps;
    else if (k < n_boundary) t = spec.h;
    m.vertices.push_back(k < n_boundary ? (k < curves.inner.size() ? curves.inner[k]
                                                                    : curves.outer[k - curves.inner.size()])
                                        : spec.lift(ab[k].x(), ab[k].y(), t));
  }
  auto ccw = [&](int a, int b, int c) {
    const Vec2 e = flat[b] - flat[a], f = flat[c] - flat[a];
    return e.x() * f.y() - e.y() * f.x() > 0.0;
  };
  for (const auto& v : vd.vertices()) {
    // Cells around a Voronoi vertex are the sites of one Delaunay cell; fan it.
    std::vector<int> ring;
    const auto* e = v.incident_edge();
    do {
      ring.push_back(static_cast<int>(e->cell()->source_index()));
      e = e->rot_next();
    } while (e != v.incident_edge());
    for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
      std::array<int, 3> t{ring[0], ring[i], ring[i + 1]};
      if (!ccw(t[0], t[1], t[2])) std::swap(t[1], t[2]);
      const Vec2 c = (ab[t[0]] + ab[t[1]] + ab[t[2]]) / 3.0;
      if (c.norm() <= spec.r) continue;
      m.triangles.push_back(t);
    }
  }
  m.rebuild_boundary();
  std::size_t flagged = 0;
  for (char b : m.boundary) flagged += b;
  if (m.boundary_loops.size() != 2 || flagged != n_boundary)
    throw InvalidMesh("Delaunay annulus lost a boundary edge; reduce the spacing");
  return m;
}

}  // namespace homegeo
