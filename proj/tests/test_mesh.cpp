#include "doctest.h"
#include "homegeo/kernels.hpp"
#include "homegeo/plateau.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace homegeo;

namespace {

// n x n grid over [x0, x1] x [y0, y1] lifted by f into the third coordinate.
TriMesh grid_mesh(int n, double x0, double x1, double y0, double y1, const std::function<double(double, double)>& f) {
  TriMesh m;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double x = x0 + (x1 - x0) * i / n, y = y0 + (y1 - y0) * j / n;
      m.vertices.emplace_back(x, y, f(x, y));
    }
  auto id = [&](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  m.rebuild_boundary();
  return m;
}

double wavy(double x, double y) { return 1.0 + 0.2 * std::sin(x) * std::cos(y); }

}  // namespace

TEST_CASE("small flat triangle at the Nil3 origin has its Euclidean area") {
  const double e = 1e-3;
  const Vec3 a(0, 0, 0), b(e, 0, 0), c(0, e, 0);
  for (auto q : {Quadrature::Centroid, Quadrature::ThreePoint})
    CHECK(triangle_area(SpaceId::nil3(), a, b, c, q) == doctest::Approx(0.5 * e * e).epsilon(0.01));
}

TEST_CASE("meshed disk on a Sol3 special plane has area pi") {
  const auto spec = RegionSpec::sol(1.0, 2.0, 0.0, 0.7);
  const TriMesh disk = reference_patch_mesh(spec, 0.7, 0.0, 1.0, 256, 32);
  // The chart polygon is inscribed; the induced area form on s = const is dx1 dx2.
  const double polygon = 0.5 * 256 * std::sin(2 * std::numbers::pi / 256);
  CHECK(mesh_area(SpaceId::sol3(), disk) == doctest::Approx(polygon).epsilon(1e-12));
  CHECK(std::abs(mesh_area(SpaceId::sol3(), disk) - std::numbers::pi) < 1e-3);
}

TEST_CASE("empty mesh has zero area") {
  TriMesh m;
  CHECK(mesh_area(SpaceId::sol3(), m) == 0.0);
  CHECK(mesh_area(SpaceId::nil3(), m, Quadrature::ThreePoint, Exec::Parallel) == 0.0);
  CHECK(mesh_area_gradient(SpaceId::nil3(), m).area == 0.0);
}

TEST_CASE("mesh area is invariant under every isometry kind") {
  const TriMesh m = grid_mesh(12, -1.0, 1.5, -0.5, 1.0, wavy);
  const double sol = mesh_area(SpaceId::sol3(), m);
  for (const Isometry& g : {Isometry::sol_translate_x1(0.7), Isometry::sol_translate_x2(-1.3), Isometry::sol_tc(0.4),
                            Isometry::sol_sigma(), Isometry::sol_tau(),
                            Isometry::sol_tc(-0.3).then(Isometry::sol_sigma())}) {
    CAPTURE(to_string(g.kind));
    CHECK(std::abs(mesh_area(SpaceId::sol3(), transform_mesh(SpaceId::sol3(), g, m)) - sol) <= 1e-10);
  }
  const double nil = mesh_area(SpaceId::nil3(), m);
  for (const Isometry& g : {Isometry::nil_translate1(0.8), Isometry::nil_translate2(-0.6), Isometry::nil_vertical(2.0),
                            Isometry::nil_rotate(1.1), Isometry::nil_reflect(),
                            Isometry::nil_rotate(0.3).then(Isometry::nil_translate1(-1.0))}) {
    CAPTURE(to_string(g.kind));
    CHECK(std::abs(mesh_area(SpaceId::nil3(), transform_mesh(SpaceId::nil3(), g, m)) - nil) <= 1e-10);
  }
  const TriMesh y = convert_mesh_chart(m, Chart::NilY);
  CHECK(std::abs(mesh_area(SpaceId::nil3_y(), transform_mesh(SpaceId::nil3_y(), Isometry::nil_translate1(0.5), y)) -
                 mesh_area(SpaceId::nil3_y(), y)) <= 1e-10);
}

TEST_CASE("mesh area converges with second order under refinement") {
  // x3 = x1 x2 / 2 over [-1, 1]^2 has area form sqrt(1 + x2^2).
  const double exact = 2.0 * (std::sqrt(2.0) + std::asinh(1.0));
  std::vector<double> err;
  for (int n : {8, 16, 32, 64})
    err.push_back(std::abs(mesh_area(SpaceId::nil3(), grid_mesh(n, -1, 1, -1, 1, [](double x, double y) {
                                       return 0.5 * x * y;
                                     })) -
                           exact));
  for (std::size_t i = 1; i < err.size(); ++i) {
    CAPTURE(i);
    CHECK(std::log2(err[i - 1] / err[i]) >= 1.9);
  }
}

TEST_CASE("analytic area gradient matches finite differences") {
  const TriMesh m = grid_mesh(5, -0.5, 1.0, 0.0, 1.2, wavy);
  for (const SpaceId& id : {SpaceId::sol3(), SpaceId::nil3()})
    for (auto q : {Quadrature::Centroid, Quadrature::ThreePoint}) {
      const auto g = mesh_area_gradient(id, m, q, Exec::Serial);
      for (int v : {7, 14, 20}) {
        for (int k = 0; k < 3; ++k) {
          TriMesh p = m, n = m;
          p.vertices[v][k] += 1e-6;
          n.vertices[v][k] -= 1e-6;
          const double fd = (mesh_area(id, p, q) - mesh_area(id, n, q)) / 2e-6;
          CHECK(std::abs(g.grad[v][k] - fd) <= 1e-8);
        }
      }
      CHECK(g.area == doctest::Approx(mesh_area(id, m, q)).epsilon(1e-14));
    }
}

TEST_CASE("parallel area gradient is bitwise identical to the serial one") {
  const TriMesh m = grid_mesh(40, -1, 1, -1, 1, wavy);
  for (const SpaceId& id : {SpaceId::sol3(), SpaceId::nil3()}) {
    const auto s = mesh_area_gradient(id, m, Quadrature::ThreePoint, Exec::Serial);
    const auto p = mesh_area_gradient(id, m, Quadrature::ThreePoint, Exec::Parallel);
    CHECK(s.area == p.area);
    CHECK(s.grad == p.grad);
    CHECK(mesh_area(id, m, Quadrature::ThreePoint, Exec::Serial) ==
          mesh_area(id, m, Quadrature::ThreePoint, Exec::Parallel));
  }
}

TEST_CASE("degenerate triangles are rejected") {
  const Vec3 a(0, 0, 1), b(1, 1, 1);
  CHECK_THROWS_AS(triangle_area_gradient(SpaceId::sol3(), a, b, a + 2.0 * (b - a)), InvalidMesh);
}

TEST_CASE("boundary loops of an annulus") {
  const TriMesh m = ruled_annulus_mesh(RegionSpec::sol(1, 3, 0.1), 32, 6);
  REQUIRE(m.boundary_loops.size() == 2);
  CHECK(m.boundary_loops[0].size() == 32);
  CHECK(m.boundary_loops[1].size() == 32);
  int flagged = 0;
  for (char b : m.boundary) flagged += b;
  CHECK(flagged == 64);

  TriMesh bad = m;
  bad.triangles.push_back(bad.triangles.front());
  CHECK_THROWS_AS(bad.rebuild_boundary(), InvalidMesh);
  bad = m;
  bad.triangles[0][1] = 100000;
  CHECK_THROWS_AS(bad.validate(), InvalidMesh);
}

TEST_CASE("OBJ and CSV round trips") {
  const TriMesh m = grid_mesh(6, -1, 1, -1, 1, wavy);
  std::stringstream ss;
  write_obj(ss, m);
  const TriMesh r = read_obj(ss);
  CHECK(r.vertices == m.vertices);
  CHECK(r.triangles == m.triangles);
  CHECK(r.boundary == m.boundary);

  // NilY meshes are written in canonical coordinates.
  const TriMesh y = convert_mesh_chart(m, Chart::NilY);
  std::stringstream sy;
  write_obj(sy, y);
  const TriMesh back = read_obj(sy);
  CHECK(back.chart == Chart::Canonical);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) CHECK((back.vertices[i] - m.vertices[i]).norm() < 1e-14);

  std::vector<double> values{0.1, -2.5, 1.0 / 3.0, 1e-300};
  std::stringstream sc;
  write_vertex_csv(sc, values);
  CHECK(read_vertex_csv(sc) == values);

  std::stringstream junk("v 1 2\nf 1 2 3\n");
  CHECK_THROWS(read_obj(junk));
}
