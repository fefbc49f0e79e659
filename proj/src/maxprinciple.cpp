#include "homegeo/maxprinciple.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace homegeo {

DiscreteSurfaceFunction DiscreteSurfaceFunction::sample(const TriMesh& m, const SurfaceScalarField& f) {
  DiscreteSurfaceFunction d;
  d.mesh = m;
  for (const Vec3& v : m.vertices) d.values.push_back(f.value(v));
  return d;
}

DiscreteSurfaceFunction DiscreteSurfaceFunction::sample(const GraphGrid& g, const SurfaceScalarField& f) {
  return sample(graph_grid_mesh(g), f);
}

void DiscreteSurfaceFunction::validate() const {
  if (values.size() != mesh.vertices.size())
    throw std::invalid_argument("value count does not match vertex count");
  mesh.validate();
}

TriMesh graph_grid_mesh(const GraphGrid& g) {
  const GraphDomain& d = g.domain;
  d.validate();
  if (static_cast<int>(g.heights.size()) != d.num_nodes()) throw GraphError("height count does not match the grid");
  TriMesh m;
  m.chart = g.space.chart;
  for (int k = 0; k < d.num_nodes(); ++k) m.vertices.push_back(g.point(k));
  auto quad = [&](int a, int b, int c, int e) {  // a b / c e, counterclockwise a -> b -> e -> c
    m.triangles.push_back({a, b, e});
    m.triangles.push_back({a, e, c});
  };
  if (d.kind == GraphDomain::Kind::Rectangle) {
    for (int j = 0; j + 1 < d.n_radial; ++j)
      for (int i = 0; i + 1 < d.n_angular; ++i) {
        const int a = j * d.n_angular + i;
        quad(a, a + 1, a + d.n_angular, a + d.n_angular + 1);
      }
  } else {
    const int off = d.kind == GraphDomain::Kind::Disk ? 1 : 0;
    const int n = d.n_angular;
    auto node = [&](int j, int i) { return off + j * n + (i % n); };
    if (off)
      for (int i = 0; i < n; ++i) m.triangles.push_back({0, node(0, i), node(0, i + 1)});
    const int rings = d.kind == GraphDomain::Kind::Disk ? (d.num_nodes() - 1) / n : d.num_nodes() / n;
    // Polar (rho, theta) is positively oriented, so ring-outward then sector-forward is counterclockwise.
    for (int j = 0; j + 1 < rings; ++j)
      for (int i = 0; i < n; ++i) {
        const int a = node(j, i), b = node(j + 1, i), c = node(j, i + 1), e = node(j + 1, i + 1);
        m.triangles.push_back({a, b, e});
        m.triangles.push_back({a, e, c});
      }
  }
  m.rebuild_boundary();
  return m;
}

std::string to_string(LaplacianWeights w) {
  switch (w) {
    case LaplacianWeights::Uniform:
      return "uniform";
    case LaplacianWeights::ClampedCotan:
      return "cotan";
    case LaplacianWeights::IntrinsicDelaunay:
      break;
  }
  return "delaunay";
}

LaplacianWeights parse_laplacian_weights(const std::string& name) {
  if (name == "uniform") return LaplacianWeights::Uniform;
  if (name == "cotan") return LaplacianWeights::ClampedCotan;
  if (name == "delaunay") return LaplacianWeights::IntrinsicDelaunay;
  throw std::invalid_argument("unknown laplacian '" + name + "' (expected uniform, cotan or delaunay)");
}

namespace {

// Triangulation carried by edge lengths only. Edge k of a triangle joins
// v[k] and v[k + 1]; nbr[k] is the (triangle, edge) across it or -1.
struct IntrinsicTriangulation {
  struct Tri {
    std::array<int, 3> v;
    std::array<double, 3> len;
    std::array<std::pair<int, int>, 3> nbr;
  };
  std::vector<Tri> tris;

  // Cotangent of the angle opposite edge k.
  double cot_opposite(int t, int k) const {
    const auto& l = tris[t].len;
    const double a = l[k], b = l[(k + 1) % 3], c = l[(k + 2) % 3];
    const double s = 0.5 * (a + b + c);
    const double area = std::sqrt(std::max(0.0, s * (s - a) * (s - b) * (s - c)));
    if (area <= 0.0) throw InvalidMesh("degenerate triangle in intrinsic triangulation");
    return (b * b + c * c - a * a) / (4.0 * area);
  }

  // Angle at corner v[k] (between edges k and k + 2).
  double angle_at(int t, int k) const {
    const auto& l = tris[t].len;
    const double a = l[(k + 1) % 3], b = l[k], c = l[(k + 2) % 3];
    return std::acos(std::clamp((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0));
  }

  void link(int t, int k, std::pair<int, int> other) {
    tris[t].nbr[k] = other;
    if (other.first >= 0) tris[other.first].nbr[other.second] = {t, k};
  }

  void flip(int t1, int k1) {
    const auto [t2, k2] = tris[t1].nbr[k1];
    const Tri A = tris[t1], B = tris[t2];
    const int a = A.v[k1], c = A.v[(k1 + 2) % 3], d = B.v[(k2 + 2) % 3];
    const int b = A.v[(k1 + 1) % 3];
    const double l_ac = A.len[(k1 + 2) % 3], l_ad = B.len[(k2 + 1) % 3];
    const double ang = angle_at(t1, k1) + angle_at(t2, (k2 + 1) % 3);
    const double l_cd = std::sqrt(std::max(0.0, l_ac * l_ac + l_ad * l_ad - 2.0 * l_ac * l_ad * std::cos(ang)));
    const auto n_bc = A.nbr[(k1 + 1) % 3], n_ca = A.nbr[(k1 + 2) % 3];
    const auto n_ad = B.nbr[(k2 + 1) % 3], n_db = B.nbr[(k2 + 2) % 3];
    tris[t1].v = {c, a, d};
    tris[t1].len = {l_ac, l_ad, l_cd};
    tris[t2].v = {d, b, c};
    tris[t2].len = {B.len[(k2 + 2) % 3], A.len[(k1 + 1) % 3], l_cd};
    link(t1, 0, n_ca);
    link(t1, 1, n_ad);
    link(t2, 0, n_db);
    link(t2, 1, n_bc);
    tris[t1].nbr[2] = {t2, 2};
    tris[t2].nbr[2] = {t1, 2};
  }

  bool is_delaunay(int t, int k) const {
    const auto [o, ok] = tris[t].nbr[k];
    return o < 0 || cot_opposite(t, k) + cot_opposite(o, ok) >= -1e-12;
  }

  void make_delaunay() {
    std::vector<std::pair<int, int>> stack;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t)
      for (int k = 0; k < 3; ++k) stack.emplace_back(t, k);
    // Each flip strictly lowers a bounded energy; the cap only guards against roundoff cycling.
    std::size_t budget = 100 * tris.size() + 1000;
    while (!stack.empty() && budget-- > 0) {
      const auto [t, k] = stack.back();
      stack.pop_back();
      if (is_delaunay(t, k)) continue;
      const int o = tris[t].nbr[k].first;
      flip(t, k);
      for (int e = 0; e < 2; ++e) {
        stack.emplace_back(t, e);
        stack.emplace_back(o, e);
      }
    }
  }
};

IntrinsicTriangulation intrinsic_from_mesh(const SpaceId& id, const TriMesh& m) {
  IntrinsicTriangulation it;
  std::map<std::pair<int, int>, std::pair<int, int>> half;
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    IntrinsicTriangulation::Tri tri;
    for (int k = 0; k < 3; ++k) {
      const int a = m.triangles[t][k], b = m.triangles[t][(k + 1) % 3];
      tri.v[k] = a;
      const Vec3 e = m.vertices[b] - m.vertices[a];
      tri.len[k] = std::sqrt(e.dot(metric(id, 0.5 * (m.vertices[a] + m.vertices[b])) * e));
      tri.nbr[k] = {-1, -1};
      half[{a, b}] = {t, k};
    }
    it.tris.push_back(tri);
  }
  for (auto& [key, tk] : half) {
    const auto twin = half.find({key.second, key.first});
    if (twin != half.end()) it.tris[tk.first].nbr[tk.second] = twin->second;
  }
  return it;
}

}  // namespace

std::vector<std::vector<std::pair<int, double>>> laplacian_weights(const SpaceId& id, const TriMesh& m,
                                                                    LaplacianWeights kind) {
  m.validate();
  std::vector<std::map<int, double>> acc(m.vertices.size());
  if (kind == LaplacianWeights::IntrinsicDelaunay) {
    IntrinsicTriangulation it = intrinsic_from_mesh(id, m);
    it.make_delaunay();
    for (int t = 0; t < static_cast<int>(it.tris.size()); ++t)
      for (int k = 0; k < 3; ++k) {
        const int i = it.tris[t].v[k], j = it.tris[t].v[(k + 1) % 3];
        const double c = 0.5 * it.cot_opposite(t, k);
        acc[i][j] += c;
        acc[j][i] += c;
      }
  }
  auto length2 = [&](int a, int b) {
    const Vec3 e = m.vertices[b] - m.vertices[a];
    return e.dot(metric(id, 0.5 * (m.vertices[a] + m.vertices[b])) * e);
  };
  for (const auto& t : m.triangles) {
    if (kind == LaplacianWeights::IntrinsicDelaunay) break;
    if (kind == LaplacianWeights::Uniform) {
      for (int k = 0; k < 3; ++k) {
        acc[t[k]][t[(k + 1) % 3]] = 1.0;
        acc[t[(k + 1) % 3]][t[k]] = 1.0;
      }
      continue;
    }
    const double l0 = length2(t[1], t[2]), l1 = length2(t[2], t[0]), l2 = length2(t[0], t[1]);
    const double a = std::sqrt(l0), b = std::sqrt(l1), c = std::sqrt(l2);
    const double s = 0.5 * (a + b + c);
    const double area = std::sqrt(std::max(0.0, s * (s - a) * (s - b) * (s - c)));
    if (area <= 0.0) throw InvalidMesh("degenerate triangle in cotan weights");
    // Angle at vertex k is opposite edge k.
    const double cot[3] = {(l1 + l2 - l0) / (4 * area), (l2 + l0 - l1) / (4 * area), (l0 + l1 - l2) / (4 * area)};
    for (int k = 0; k < 3; ++k) {
      const int i = t[(k + 1) % 3], j = t[(k + 2) % 3];
      acc[i][j] += 0.5 * cot[k];
      acc[j][i] += 0.5 * cot[k];
    }
  }
  std::vector<std::vector<std::pair<int, double>>> w(m.vertices.size());
  for (std::size_t v = 0; v < acc.size(); ++v)
    for (const auto& [j, x] : acc[v]) w[v].emplace_back(j, std::max(0.0, x));
  return w;
}

std::vector<double> discrete_laplacian(const SpaceId& id, const DiscreteSurfaceFunction& f, LaplacianWeights kind) {
  f.validate();
  const auto w = laplacian_weights(id, f.mesh, kind);
  std::vector<double> out(f.values.size(), 0.0);
  for (std::size_t v = 0; v < w.size(); ++v) {
    if (f.mesh.boundary[v]) continue;
    double sum = 0.0, total = 0.0;
    for (const auto& [j, x] : w[v]) {
      sum += x * (f.values[j] - f.values[v]);
      total += x;
    }
    out[v] = total > 0.0 ? sum / total : 0.0;
  }
  return out;
}

std::string to_string(MaxPrincipleResult::Status s) {
  switch (s) {
    case MaxPrincipleResult::Status::Pass:
      return "pass";
    case MaxPrincipleResult::Status::Fail:
      return "fail";
    case MaxPrincipleResult::Status::HypothesisFailed:
      break;
  }
  return "hypothesis_failed";
}

MaxPrincipleResult discrete_max_principle_check(const SpaceId& id, const DiscreteSurfaceFunction& f,
                                                LaplacianWeights kind, double tol) {
  f.validate();
  const auto& b = f.mesh.boundary;
  if (std::find(b.begin(), b.end(), 1) == b.end())
    throw std::invalid_argument("maximum principle needs a mesh with nonempty boundary");
  const auto lap = discrete_laplacian(id, f, kind);
  MaxPrincipleResult r;
  r.interior_max = -std::numeric_limits<double>::infinity();
  r.boundary_sup = -std::numeric_limits<double>::infinity();
  r.min_laplacian = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < f.values.size(); ++v) {
    if (b[v]) {
      r.boundary_sup = std::max(r.boundary_sup, f.values[v]);
      continue;
    }
    r.interior_max = std::max(r.interior_max, f.values[v]);
    if (lap[v] < r.min_laplacian) {
      r.min_laplacian = lap[v];
      r.worst_vertex = static_cast<int>(v);
    }
  }
  if (r.worst_vertex >= 0 && r.min_laplacian < -tol)
    r.status = MaxPrincipleResult::Status::HypothesisFailed;
  else
    r.status = r.interior_max <= r.boundary_sup + tol ? MaxPrincipleResult::Status::Pass
                                                      : MaxPrincipleResult::Status::Fail;
  return r;
}

DiscreteSurfaceFunction random_subharmonic_field(const SpaceId& id, const TriMesh& m, LaplacianWeights kind,
                                                 std::mt19937_64& rng) {
  const auto w = laplacian_weights(id, m, kind);
  std::uniform_real_distribution<double> source(0.0, 1.0), bval(-1.0, 1.0);
  const int n = static_cast<int>(m.vertices.size());
  std::vector<int> slot(n, -1);
  int ni = 0;
  for (int v = 0; v < n; ++v)
    if (!m.boundary[v]) slot[v] = ni++;
  DiscreteSurfaceFunction f;
  f.mesh = m;
  f.values.assign(n, 0.0);
  for (int v = 0; v < n; ++v)
    if (m.boundary[v]) f.values[v] = bval(rng);
  if (ni == 0) return f;

  // Normalized rows: f_v - sum_j (w_vj / W_v) f_j = -q_v.
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs(ni);
  for (int v = 0; v < n; ++v) {
    if (slot[v] < 0) continue;
    double total = 0.0;
    for (const auto& e : w[v]) total += e.second;
    if (total <= 0.0) throw std::invalid_argument("interior vertex without positive Laplacian weights");
    trip.emplace_back(slot[v], slot[v], 1.0);
    rhs[slot[v]] = -source(rng);
    for (const auto& [j, x] : w[v]) {
      if (slot[j] >= 0)
        trip.emplace_back(slot[v], slot[j], -x / total);
      else
        rhs[slot[v]] += x / total * f.values[j];
    }
  }
  Eigen::SparseMatrix<double> A(ni, ni);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("discrete Laplace problem is singular");
  const Eigen::VectorXd x = lu.solve(rhs);
  for (int v = 0; v < n; ++v)
    if (slot[v] >= 0) f.values[v] = x[slot[v]];
  return f;
}

}  // namespace homegeo
