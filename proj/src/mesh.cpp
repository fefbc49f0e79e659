#include "homegeo/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

namespace homegeo {

void TriMesh::validate() const {
  const int n = static_cast<int>(vertices.size());
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k)
      if (t[k] < 0 || t[k] >= n) throw InvalidMesh("triangle references vertex out of range");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw InvalidMesh("triangle repeats a vertex");
  }
  if (!boundary.empty() && boundary.size() != vertices.size())
    throw InvalidMesh("boundary flag count does not match vertex count");
  for (const auto& v : vertices)
    if (!v.allFinite()) throw InvalidMesh("non-finite vertex");
}

void TriMesh::rebuild_boundary() {
  validate();
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  std::map<int, int> next;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      const int uses = edge_use[{std::min(a, b), std::max(a, b)}];
      if (uses > 2) throw InvalidMesh("non-manifold edge");
      if (uses == 1) {
        if (next.count(a)) throw InvalidMesh("boundary vertex with two outgoing boundary edges");
        next[a] = b;
      }
    }
  boundary.assign(vertices.size(), 0);
  boundary_loops.clear();
  std::map<int, bool> seen;
  for (const auto& [start, _] : next) {
    if (seen[start]) continue;
    std::vector<int> loop;
    int v = start;
    do {
      if (seen[v]) throw InvalidMesh("boundary chains intersect");
      seen[v] = true;
      boundary[v] = 1;
      loop.push_back(v);
      auto it = next.find(v);
      if (it == next.end()) throw InvalidMesh("open boundary chain");
      v = it->second;
    } while (v != start);
    boundary_loops.push_back(std::move(loop));
  }
}

namespace {

struct QuadRule {
  int n;
  std::array<std::array<double, 3>, 3> bary;
  double weight;  // reference triangle area times per-point weight
};

const QuadRule& rule(Quadrature q) {
  static const QuadRule centroid{1, {{{1.0 / 3, 1.0 / 3, 1.0 / 3}}}, 0.5};
  static const QuadRule three{3,
                              {{{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}}},
                              1.0 / 6};
  return q == Quadrature::Centroid ? centroid : three;
}

using Mat32 = Eigen::Matrix<double, 3, 2>;

}  // namespace

double triangle_area(const SpaceId& id, const Vec3& a, const Vec3& b, const Vec3& c, Quadrature q) {
  const QuadRule& r = rule(q);
  Mat32 j;
  j.col(0) = b - a;
  j.col(1) = c - a;
  double sum = 0.0;
  for (int k = 0; k < r.n; ++k) {
    const Vec3 p = r.bary[k][0] * a + r.bary[k][1] * b + r.bary[k][2] * c;
    const Mat2 m = j.transpose() * metric(id, p) * j;
    sum += std::sqrt(std::max(0.0, m.determinant()));
  }
  return r.weight * sum;
}

// With M = J^T G J and q = sqrt(det M):
//   dq/dJ   = q G J M^-1
//   dq/dP_k = (q/2) tr(M^-1 J^T dG/dx_k J)
TriangleAreaGradient triangle_area_gradient(const SpaceId& id, const Vec3& a, const Vec3& b, const Vec3& c,
                                            Quadrature q) {
  const QuadRule& r = rule(q);
  Mat32 j;
  j.col(0) = b - a;
  j.col(1) = c - a;
  TriangleAreaGradient out;
  out.grad = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  for (int k = 0; k < r.n; ++k) {
    const Vec3 p = r.bary[k][0] * a + r.bary[k][1] * b + r.bary[k][2] * c;
    const Mat3 g = metric(id, p);
    const Mat32 gj = g * j;
    const Mat2 m = j.transpose() * gj;
    const double det = m.determinant();
    if (!(det > 0.0)) throw InvalidMesh("degenerate triangle in area gradient");
    const double qv = std::sqrt(det);
    const Mat2 kinv = m.inverse();
    const Mat32 dj = qv * gj * kinv;
    const auto dg = metric_partials(id, p);
    Vec3 dp;
    for (int d = 0; d < 3; ++d) dp[d] = 0.5 * qv * (kinv * j.transpose() * dg[d] * j).trace();
    out.area += r.weight * qv;
    out.grad[0] += r.weight * (-dj.col(0) - dj.col(1) + r.bary[k][0] * dp);
    out.grad[1] += r.weight * (dj.col(0) + r.bary[k][1] * dp);
    out.grad[2] += r.weight * (dj.col(1) + r.bary[k][2] * dp);
  }
  return out;
}

double mesh_area(const SpaceId& id, const TriMesh& m, Quadrature q) {
  if (m.chart != id.chart) throw std::invalid_argument("mesh chart does not match space chart");
  m.validate();
  double sum = 0.0;
  for (const auto& t : m.triangles) sum += triangle_area(id, m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]], q);
  return sum;
}

TriMesh transform_mesh(const SpaceId& id, const Isometry& g, const TriMesh& m) {
  if (!g.valid_for(id.space)) throw std::invalid_argument("isometry does not act on " + to_string(id.space));
  TriMesh out = m;
  for (auto& v : out.vertices) v = apply_isometry_raw(id, g, v);
  return out;
}

TriMesh convert_mesh_chart(const TriMesh& m, Chart target) {
  TriMesh out = m;
  out.chart = target;
  for (auto& v : out.vertices) v = nil_chart_convert(Point(v, m.chart), target).x;
  return out;
}

double min_triangle_angle_deg(const TriMesh& m) {
  double worst = 180.0;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      const Vec3 e1 = m.vertices[t[(k + 1) % 3]] - m.vertices[t[k]];
      const Vec3 e2 = m.vertices[t[(k + 2) % 3]] - m.vertices[t[k]];
      const double ang = std::atan2(e1.cross(e2).norm(), e1.dot(e2));
      worst = std::min(worst, ang * 180.0 / std::numbers::pi);
    }
  return worst;
}

std::vector<std::vector<int>> vertex_neighbours(const TriMesh& m) {
  std::vector<std::vector<int>> nb(m.vertices.size());
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      nb[t[k]].push_back(t[(k + 1) % 3]);
      nb[t[k]].push_back(t[(k + 2) % 3]);
    }
  for (auto& list : nb) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return nb;
}

void write_obj(std::ostream& os, const TriMesh& m) {
  os << std::setprecision(17);
  for (const auto& v : m.vertices) {
    const Vec3 x = m.chart == Chart::Canonical ? v : nil_chart_convert(Point(v, m.chart), Chart::Canonical).x;
    os << "v " << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
  }
  for (const auto& t : m.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_obj(const std::string& path, const TriMesh& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_obj(os, m);
}

TriMesh read_obj(std::istream& is) {
  TriMesh m;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 x;
      if (!(ls >> x[0] >> x[1] >> x[2])) throw InvalidMesh("bad vertex on line " + std::to_string(lineno));
      m.vertices.push_back(x);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) idx.push_back(std::stoi(tok.substr(0, tok.find('/'))) - 1);
      if (idx.size() != 3) throw InvalidMesh("only triangles are supported (line " + std::to_string(lineno) + ")");
      m.triangles.push_back({idx[0], idx[1], idx[2]});
    }
  }
  m.rebuild_boundary();
  return m;
}

TriMesh read_obj(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_obj(is);
}

void write_vertex_csv(std::ostream& os, const std::vector<double>& values) {
  os << "vertex_index,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << values[i] << '\n';
}

std::vector<double> read_vertex_csv(std::istream& is) {
  std::vector<double> values;
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("malformed CSV line: " + line);
    const auto idx = std::stoul(line.substr(0, comma));
    if (idx != values.size()) throw std::runtime_error("CSV vertex indices must be consecutive");
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return values;
}

}  // namespace homegeo
