#include "homegeo/kernels.hpp"

namespace homegeo {

namespace {

void require_mesh_chart(const SpaceId& id, const TriMesh& m) {
  if (m.chart != id.chart) throw std::invalid_argument("mesh chart does not match space chart");
}

}  // namespace

MeshAreaGradient mesh_area_gradient(const SpaceId& id, const TriMesh& m, Quadrature q, Exec exec) {
  require_mesh_chart(id, m);
  const auto nt = static_cast<long>(m.triangles.size());
  MeshAreaGradient out;
  out.grad.assign(m.vertices.size(), Vec3::Zero());
  auto tri = [&](long t) {
    const auto& f = m.triangles[t];
    return triangle_area_gradient(id, m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]], q);
  };
  // Extended-precision sum keeps line searches meaningful near convergence.
  long double area = 0.0L;
  auto accumulate = [&](long t, const TriangleAreaGradient& g) {
    area += g.area;
    for (int k = 0; k < 3; ++k) out.grad[m.triangles[t][k]] += g.grad[k];
  };
  if (exec == Exec::Serial) {
    for (long t = 0; t < nt; ++t) accumulate(t, tri(t));
    out.area = static_cast<double>(area);
    return out;
  }
  std::vector<TriangleAreaGradient> buf(nt);
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (long t = 0; t < nt; ++t) {
    try {
      buf[t] = tri(t);
    } catch (const InvalidMesh&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw InvalidMesh("degenerate triangle in area gradient");
  for (long t = 0; t < nt; ++t) accumulate(t, buf[t]);
  out.area = static_cast<double>(area);
  return out;
}

double mesh_area(const SpaceId& id, const TriMesh& m, Quadrature q, Exec exec) {
  if (exec == Exec::Serial) return mesh_area(id, m, q);
  require_mesh_chart(id, m);
  m.validate();
  const auto nt = static_cast<long>(m.triangles.size());
  std::vector<double> buf(nt);
#pragma omp parallel for schedule(static)
  for (long t = 0; t < nt; ++t) {
    const auto& f = m.triangles[t];
    buf[t] = triangle_area(id, m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]], q);
  }
  double sum = 0.0;
  for (double a : buf) sum += a;
  return sum;
}

}  // namespace homegeo
