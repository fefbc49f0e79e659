#include "doctest.h"
#include "homegeo/maxprinciple.hpp"
#include "homegeo/plateau.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace homegeo;

namespace {

constexpr LaplacianWeights kAllWeights[] = {LaplacianWeights::Uniform, LaplacianWeights::ClampedCotan,
                                            LaplacianWeights::IntrinsicDelaunay};

double signed_area2(const TriMesh& m, const std::array<int, 3>& t, int drop) {
  const int i = drop == 0 ? 1 : 0, j = drop == 2 ? 1 : 2;
  const Vec3 a = m.vertices[t[0]], b = m.vertices[t[1]], c = m.vertices[t[2]];
  return (b[i] - a[i]) * (c[j] - a[j]) - (b[j] - a[j]) * (c[i] - a[i]);
}

}  // namespace

TEST_CASE("randomized discrete-subharmonic fields obey the maximum principle") {
  std::mt19937_64 rng(42);
  const std::vector<std::pair<SpaceId, TriMesh>> meshes = {
      {SpaceId::sol3(), ruled_annulus_mesh(RegionSpec::sol(1, 3, 0.1), 48, 12)},
      {SpaceId::sol3(), isotropic_annulus_mesh(RegionSpec::sol(1, 3, 0.1), 0.3)},
      {SpaceId::nil3(), ruled_annulus_mesh(RegionSpec::nil_graph(1, 3, 0.2, EntireGraph::saddle()), 40, 10)},
      {SpaceId::nil3_y(), isotropic_annulus_mesh(RegionSpec::nil_vertical(1, 3, 0.1), 0.3)},
  };
  int fields = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& [id, m] = meshes[trial % meshes.size()];
    const LaplacianWeights kind = kAllWeights[trial % 3];
    const DiscreteSurfaceFunction f = random_subharmonic_field(id, m, kind, rng);
    const MaxPrincipleResult r = discrete_max_principle_check(id, f, kind, 1e-10);
    CAPTURE(trial);
    CHECK(r.min_laplacian >= -1e-10);
    CHECK(r.passes());
    CHECK(r.interior_max <= r.boundary_sup + 1e-10);
    ++fields;
  }
  CHECK(fields == 50);
}

TEST_CASE("constant function passes with equal extrema") {
  const TriMesh m = ruled_annulus_mesh(RegionSpec::sol(1, 2, 0.1), 32, 6);
  const auto f = DiscreteSurfaceFunction::sample(m, SurfaceScalarField::constant(1.5));
  for (auto kind : kAllWeights) {
    const auto r = discrete_max_principle_check(SpaceId::sol3(), f, kind);
    CHECK(r.passes());
    CHECK(r.interior_max == 1.5);
    CHECK(r.boundary_sup == 1.5);
  }
}

TEST_CASE("an interior spike reports hypothesis_failed, not fail") {
  const TriMesh m = ruled_annulus_mesh(RegionSpec::sol(1, 2, 0.1), 32, 6);
  auto f = DiscreteSurfaceFunction::sample(m, SurfaceScalarField::constant(0.0));
  int spike = -1;
  for (std::size_t v = 0; v < m.vertices.size() && spike < 0; ++v)
    if (!m.boundary[v]) spike = static_cast<int>(v);
  f.values[spike] = 5.0;
  for (auto kind : kAllWeights) {
    const auto r = discrete_max_principle_check(SpaceId::sol3(), f, kind);
    CHECK(r.status == MaxPrincipleResult::Status::HypothesisFailed);
    CHECK(to_string(r.status) == "hypothesis_failed");
    CHECK(r.worst_vertex == spike);
    CHECK(r.interior_max == 5.0);
  }
}

TEST_CASE("a mesh without boundary is rejected") {
  TriMesh tet;
  tet.vertices = {Vec3(0, 0, 1), Vec3(1, 0, 1), Vec3(0, 1, 1), Vec3(0, 0, 2)};
  tet.triangles = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  tet.rebuild_boundary();
  const auto f = DiscreteSurfaceFunction::sample(tet, SurfaceScalarField::constant(1.0));
  CHECK_THROWS_AS(discrete_max_principle_check(SpaceId::sol3(), f, LaplacianWeights::Uniform),
                  std::invalid_argument);
}

TEST_CASE("weights are symmetric and nonnegative") {
  const TriMesh m = ruled_annulus_mesh(RegionSpec::sol(1, 4, 0.1), 40, 8);
  for (auto kind : kAllWeights) {
    const auto w = laplacian_weights(SpaceId::sol3(), m, kind);
    for (std::size_t v = 0; v < w.size(); ++v)
      for (const auto& [j, x] : w[v]) {
        CHECK(x >= 0.0);
        double back = -1.0;
        for (const auto& [k, y] : w[j])
          if (k == static_cast<int>(v)) back = y;
        CHECK(back == x);
      }
  }
}

TEST_CASE("intrinsic Delaunay weights are exact for linear functions on a flat level") {
  // On s = 1 the Sol3 metric is constant, so coordinate functions are harmonic.
  const TriMesh m = ruled_annulus_mesh(RegionSpec::sol(1, 3, 0.0), 48, 10);
  for (int k : {0, 1}) {
    DiscreteSurfaceFunction f;
    f.mesh = m;
    for (const Vec3& x : m.vertices) f.values.push_back(x[k]);
    const auto lap = discrete_laplacian(SpaceId::sol3(), f, LaplacianWeights::IntrinsicDelaunay);
    double worst = 0.0;
    for (double l : lap) worst = std::max(worst, std::abs(l));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("intrinsic Delaunay flips a non-Delaunay diagonal") {
  // Flat rhombus split along its long diagonal.
  TriMesh m;
  m.vertices = {Vec3(-2, 0, 1), Vec3(0, -0.5, 1), Vec3(2, 0, 1), Vec3(0, 0.5, 1)};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  m.rebuild_boundary();
  const Mat3 g = metric(SpaceId::sol3(), Vec3(0, 0, 1));
  const double sx = std::sqrt(g(0, 0)), sy = std::sqrt(g(1, 1));
  const auto w = laplacian_weights(SpaceId::sol3(), m, LaplacianWeights::IntrinsicDelaunay);
  auto weight = [&](int a, int b) {
    for (const auto& [j, x] : w[a])
      if (j == b) return x;
    return 0.0;
  };
  // Whichever diagonal is Delaunay in the metric carries the weight; the other is gone.
  const double long_diag = 4.0 * sx, short_diag = 1.0 * sy;
  if (short_diag < long_diag) {
    CHECK(weight(0, 2) == 0.0);
    CHECK(weight(1, 3) > 0.0);
  } else {
    CHECK(weight(0, 2) > 0.0);
  }
  CHECK(parse_laplacian_weights("delaunay") == LaplacianWeights::IntrinsicDelaunay);
  CHECK(to_string(LaplacianWeights::ClampedCotan) == "cotan");
  CHECK_THROWS_AS(parse_laplacian_weights("harmonic"), std::invalid_argument);
}

TEST_CASE("graph grid meshes are counterclockwise with the domain boundary") {
  for (const GraphDomain& d : {GraphDomain::disk(2.0, 24, 8), GraphDomain::annulus(1.0, 3.0, 24, 8),
                               GraphDomain::rectangle(-1, 1, 0, 2, 9, 8)}) {
    GraphGrid g;
    g.domain = d;
    g.heights.assign(d.num_nodes(), 0.3);
    const TriMesh m = graph_grid_mesh(g);
    CHECK(static_cast<int>(m.vertices.size()) == d.num_nodes());
    for (const auto& t : m.triangles) CHECK(signed_area2(m, t, 2) > 0.0);
    for (int k = 0; k < d.num_nodes(); ++k) CHECK(static_cast<bool>(m.boundary[k]) == d.is_boundary(k));
  }
}

TEST_CASE("isotropic annulus mesh") {
  const auto spec = RegionSpec::sol(1, 3, 0.1);
  const TriMesh m = isotropic_annulus_mesh(spec, 0.2);
  REQUIRE(m.boundary_loops.size() == 2);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (!m.boundary[v]) continue;
    const Vec3 rc = spec.region_coords(m.vertices[v]);
    const double rho = rc.head<2>().norm();
    const bool inner = std::abs(rho - 1.0) < 1e-12 && std::abs(rc[2] - 1.1) < 1e-12;
    const bool outer = std::abs(rho - 3.0) < 1e-12 && std::abs(rc[2] - 1.0) < 1e-12;
    CHECK((inner || outer));
  }
  double lo = 1e9, hi = 0.0;
  for (const auto& t : m.triangles) {
    CHECK(signed_area2(m, t, 2) > 0.0);
    for (int k = 0; k < 3; ++k) {
      const Vec3 e = m.vertices[t[(k + 1) % 3]] - m.vertices[t[k]];
      const double len = std::sqrt(e.dot(metric(SpaceId::sol3(), m.vertices[t[k]]) * e));
      lo = std::min(lo, len);
      hi = std::max(hi, len);
    }
  }
  // Edge lengths stay within a small band around the spacing despite the e^2 anisotropy of the chart.
  CHECK(hi / lo < 4.0);
  CHECK(hi < 2 * 0.2);
  CHECK_THROWS_AS(isotropic_annulus_mesh(spec, -1.0), std::invalid_argument);
}

TEST_CASE("1/s on the converged Sol3 annulus satisfies the check") {
  const auto spec = RegionSpec::sol(1, 4, 0.1);
  MinimizeOptions opts;
  opts.grad_tol = 1e-8;
  const auto res = minimize_area(spec.space(), isotropic_annulus_mesh(spec, 0.1), opts);
  const auto f = DiscreteSurfaceFunction::sample(res.mesh, SurfaceScalarField::inverse_coordinate(2));
  const auto r = discrete_max_principle_check(spec.space(), f, LaplacianWeights::IntrinsicDelaunay, 1e-6);
  CHECK(r.passes());
  CHECK(r.min_laplacian >= -1e-6);
  CHECK(r.interior_max <= r.boundary_sup + 1e-6);
  CHECK(r.boundary_sup == doctest::Approx(1.0).epsilon(1e-15));
}
