// Serial reference vs OpenMP kernels: wall time and agreement.
#include "homegeo/graph.hpp"
#include "homegeo/kernels.hpp"
#include "homegeo/plateau.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

using namespace homegeo;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int k = 0; k < reps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, double diff) {
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx   max|diff| = %.3g\n", name, 1e3 * serial, 1e3 * parallel,
              serial / parallel, diff);
}

}  // namespace

int main() {
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const auto spec = RegionSpec::sol(1.0, 4.0, 0.1);
  const TriMesh m = ruled_annulus_mesh(spec, 256, 64);
  for (const SpaceId& id : {SpaceId::sol3(), SpaceId::nil3()}) {
    MeshAreaGradient s, p;
    const double ts = best_of(5, [&] { s = mesh_area_gradient(id, m, Quadrature::ThreePoint, Exec::Serial); });
    const double tp = best_of(5, [&] { p = mesh_area_gradient(id, m, Quadrature::ThreePoint, Exec::Parallel); });
    double diff = std::abs(s.area - p.area);
    for (std::size_t v = 0; v < s.grad.size(); ++v) diff = std::max(diff, (s.grad[v] - p.grad[v]).cwiseAbs().maxCoeff());
    row(id.space == Space::Sol3 ? "area_gradient sol3" : "area_gradient nil3", ts, tp, diff);
  }

  const auto d = GraphDomain::annulus(1.0, 3.0, 256, 256);
  GraphGrid g;
  g.domain = d;
  g.space = SpaceId::nil3();
  g.heights = harmonic_extension(d, [](double x, double y) { return 0.5 * x * y + 0.2 * std::sin(x); });
  std::vector<double> rs, rp;
  const double ts = best_of(5, [&] { rs = graph_residual(g, Exec::Serial); });
  const double tp = best_of(5, [&] { rp = graph_residual(g, Exec::Parallel); });
  double diff = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) diff = std::max(diff, std::abs(rs[k] - rp[k]));
  row("graph_residual nil3", ts, tp, diff);
  return 0;
}
