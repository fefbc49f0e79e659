#include "homegeo/plateau.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

namespace homegeo {

int graph_axis_coordinate(Chart chart) { return chart == Chart::NilY ? 0 : 2; }

double riemannian_gradient_norm(const SpaceId& id, const TriMesh& m, const std::vector<Vec3>& grad,
                                Motion motion) {
  const int k = graph_axis_coordinate(m.chart);
  double sum = 0.0;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (m.boundary[v]) continue;
    const Mat3 G = metric(id, m.vertices[v]);
    sum += motion == Motion::Free ? grad[v].dot(G.ldlt().solve(grad[v])) : grad[v][k] * grad[v][k] / G(k, k);
  }
  return std::sqrt(sum);
}

double worst_perturbation_decrease(const SpaceId& id, const TriMesh& m, int trials, double delta,
                                   unsigned long long seed, Motion motion, Quadrature q) {
  std::vector<int> free;
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (!m.boundary[v]) free.push_back(static_cast<int>(v));
  if (free.empty()) return 0.0;
  std::vector<std::vector<int>> star(m.vertices.size());
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
    for (int k : m.triangles[t]) star[k].push_back(static_cast<int>(t));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  std::normal_distribution<double> normal;
  const int axis = graph_axis_coordinate(m.chart);
  TriMesh work = m;
  auto star_area = [&](int v) {
    long double a = 0.0L;
    for (int t : star[v]) {
      const auto& f = work.triangles[t];
      a += triangle_area(id, work.vertices[f[0]], work.vertices[f[1]], work.vertices[f[2]], q);
    }
    return a;
  };
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const int v = free[pick(rng)];
    const Mat3 G = metric(id, m.vertices[v]);
    Vec3 dir = Vec3::Zero();
    if (motion == Motion::Free) {
      dir = Vec3(normal(rng), normal(rng), normal(rng));
    } else {
      dir[axis] = normal(rng) < 0.0 ? -1.0 : 1.0;
    }
    dir *= delta / std::sqrt(dir.dot(G * dir));
    const long double before = star_area(v);
    work.vertices[v] = m.vertices[v] + dir;
    const long double after = star_area(v);
    work.vertices[v] = m.vertices[v];
    worst = std::max(worst, static_cast<double>(before - after));
  }
  return worst;
}

namespace {

using VecX = Eigen::VectorXd;

// Area as a function of the free vertex coordinates.
class AreaObjective {
 public:
  AreaObjective(const SpaceId& id, TriMesh mesh, const MinimizeOptions& opts)
      : id_(id), mesh_(std::move(mesh)), opts_(opts), axis_(graph_axis_coordinate(mesh_.chart)) {
    for (std::size_t v = 0; v < mesh_.vertices.size(); ++v)
      if (!mesh_.boundary[v]) free_.push_back(static_cast<int>(v));
    per_ = opts.motion == Motion::Free ? 3 : 1;
  }

  int dim() const { return per_ * static_cast<int>(free_.size()); }
  const TriMesh& mesh() const { return mesh_; }

  VecX get() const {
    VecX x(dim());
    for (std::size_t k = 0; k < free_.size(); ++k) x.segment(per_ * k, per_) = restrict(mesh_.vertices[free_[k]]);
    return x;
  }

  void set(const VecX& x) {
    for (std::size_t k = 0; k < free_.size(); ++k) {
      Vec3& p = mesh_.vertices[free_[k]];
      if (per_ == 3)
        p = x.segment<3>(3 * k);
      else
        p[axis_] = x[k];
    }
  }

  // Vertex vector reduced to the admissible components.
  VecX restrict(const Vec3& w) const {
    if (per_ == 3) return w;
    return VecX::Constant(1, w[axis_]);
  }

  // False when some triangle degenerates or flips against `normals`.
  bool eval(const VecX& x, double& f, VecX& g, const std::vector<Vec3>* normals) {
    const VecX saved = get();
    set(x);
    bool ok = true;
    if (normals) {
      const auto n = chart_normals();
      for (std::size_t t = 0; t < n.size() && ok; ++t) ok = n[t].dot((*normals)[t]) > 0.0;
    }
    if (ok) {
      try {
        const MeshAreaGradient ag = mesh_area_gradient(id_, mesh_, opts_.quadrature, opts_.exec);
        f = ag.area;
        g.resize(dim());
        for (std::size_t k = 0; k < free_.size(); ++k) g.segment(per_ * k, per_) = restrict(ag.grad[free_[k]]);
        last_full_grad_ = ag.grad;
      } catch (const InvalidMesh&) {
        ok = false;
      }
    }
    if (!ok) set(saved);
    return ok;
  }

  std::vector<Vec3> chart_normals() const {
    std::vector<Vec3> n;
    n.reserve(mesh_.triangles.size());
    for (const auto& t : mesh_.triangles)
      n.push_back((mesh_.vertices[t[1]] - mesh_.vertices[t[0]]).cross(mesh_.vertices[t[2]] - mesh_.vertices[t[0]]));
    return n;
  }

  // Inverse metric (restricted to the admissible motion) at each free vertex.
  VecX precondition(const VecX& q) const {
    VecX r(q.size());
    for (std::size_t k = 0; k < free_.size(); ++k) {
      const Mat3 G = metric(id_, mesh_.vertices[free_[k]]);
      if (per_ == 3)
        r.segment<3>(3 * k) = G.ldlt().solve(Vec3(q.segment<3>(3 * k)));
      else
        r[k] = q[k] / G(axis_, axis_);
    }
    return r;
  }

  // Largest Riemannian vertex displacement of direction d.
  double max_displacement(const VecX& d) const {
    double m = 0.0;
    for (std::size_t k = 0; k < free_.size(); ++k) {
      const Mat3 G = metric(id_, mesh_.vertices[free_[k]]);
      const double sq = per_ == 3 ? Vec3(d.segment<3>(3 * k)).dot(G * Vec3(d.segment<3>(3 * k)))
                                  : d[k] * d[k] * G(axis_, axis_);
      m = std::max(m, std::sqrt(sq));
    }
    return m;
  }

  double min_edge_length() const {
    double m = 1e300;
    for (const auto& t : mesh_.triangles)
      for (int k = 0; k < 3; ++k) {
        const Vec3& a = mesh_.vertices[t[k]];
        const Vec3& b = mesh_.vertices[t[(k + 1) % 3]];
        const Vec3 e = b - a;
        m = std::min(m, std::sqrt(e.dot(metric(id_, 0.5 * (a + b)) * e)));
      }
    return m;
  }

  double min_triangle_area() const {
    double m = 1e300;
    for (const auto& t : mesh_.triangles)
      m = std::min(m, triangle_area(id_, mesh_.vertices[t[0]], mesh_.vertices[t[1]], mesh_.vertices[t[2]],
                                    opts_.quadrature));
    return m;
  }

  const std::vector<Vec3>& full_gradient() const { return last_full_grad_; }

 private:
  SpaceId id_;
  TriMesh mesh_;
  MinimizeOptions opts_;
  int axis_;
  int per_ = 3;
  std::vector<int> free_;
  std::vector<Vec3> last_full_grad_;
};

double max_mean_curvature(const SpaceId& id, const TriMesh& m, const std::vector<Vec3>& grad, Quadrature q) {
  std::vector<double> star(m.vertices.size(), 0.0);
  for (const auto& t : m.triangles) {
    const double a = triangle_area(id, m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]], q);
    for (int k = 0; k < 3; ++k) star[t[k]] += a / 3.0;
  }
  double worst = 0.0;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (m.boundary[v] || star[v] <= 0.0) continue;
    const double gn = std::sqrt(grad[v].dot(metric(id, m.vertices[v]).ldlt().solve(grad[v])));
    worst = std::max(worst, gn / (2.0 * star[v]));
  }
  return worst;
}

double polyline_length(const Polyline& p) {
  double l = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l += (p[(i + 1) % p.size()] - p[i]).norm();
  return l;
}

}  // namespace

MinimizeResult minimize_area(const SpaceId& id, TriMesh mesh, const MinimizeOptions& opts) {
  if (mesh.chart != id.chart) throw std::invalid_argument("mesh chart does not match space chart");
  mesh.validate();
  if (mesh.boundary.size() != mesh.vertices.size()) mesh.rebuild_boundary();
  if (opts.max_iter < 0 || !(opts.grad_tol > 0.0) || opts.lbfgs_memory < 1)
    throw std::invalid_argument("bad minimizer options");

  AreaObjective obj(id, std::move(mesh), opts);
  MinimizeResult res;
  VecX x = obj.get(), g;
  double f = 0.0;
  if (!obj.eval(x, f, g, nullptr)) throw InvalidMesh("initial mesh has degenerate triangles");
  if (opts.keep_history) res.area_history.push_back(f);
  auto gnorm = [&] { return std::sqrt(g.dot(obj.precondition(g))); };
  double gn = gnorm();

  std::deque<std::pair<VecX, VecX>> memory;  // (s, y)
  int it = 0;
  bool stalled = false;
  while (gn > opts.grad_tol && it < opts.max_iter) {
    // Two-loop recursion with H0 = gamma * blockdiag(G^-1).
    VecX q = g;
    std::vector<double> alpha(memory.size());
    for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
      const auto& [s, y] = memory[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    double gamma = 1.0;
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      gamma = s.dot(y) / y.dot(obj.precondition(y));
    }
    VecX d = gamma * obj.precondition(q);
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, y] = memory[i];
      const double beta = y.dot(d) / y.dot(s);
      d += s * (alpha[i] - beta);
    }
    d = -d;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      memory.clear();
      d = -obj.precondition(g);
      slope = g.dot(d);
    }

    // Cap the step at half the shortest edge.
    const auto normals = obj.chart_normals();
    double t = 1.0;
    const double disp = obj.max_displacement(d);
    const double cap = 0.5 * obj.min_edge_length();
    if (disp * t > cap) t = cap / disp;

    bool accepted = false;
    VecX xn, gn_vec;
    double fn = 0.0;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      xn = x + t * d;
      if (obj.eval(xn, fn, gn_vec, &normals) && fn <= f + opts.armijo * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      obj.set(x);
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      stalled = true;
      break;
    }
    const VecX s = xn - x, y = gn_vec - g;
    x = std::move(xn);
    f = fn;
    g = std::move(gn_vec);
    gn = gnorm();
    ++it;
    if (opts.keep_history) res.area_history.push_back(f);
    if (s.dot(y) > 1e-14 * std::sqrt(s.squaredNorm() * y.squaredNorm())) {
      memory.emplace_back(s, y);
      if (static_cast<int>(memory.size()) > opts.lbfgs_memory) memory.pop_front();
    }
    if (it % 10 == 0 && obj.min_triangle_area() < opts.area_floor)
      throw RemeshNeeded("triangle area fell below the floor; remesh and restart");
  }
  if (obj.min_triangle_area() < opts.area_floor)
    throw RemeshNeeded("triangle area fell below the floor; remesh and restart");
  if (gn > opts.grad_tol) {
    throw MinimizeError(std::string(stalled ? "line search stalled" : "iteration limit reached") +
                            " with gradient norm " + std::to_string(gn),
                        gn, obj.mesh());
  }
  obj.eval(x, f, g, nullptr);
  res.mesh = obj.mesh();
  res.area = f;
  res.grad_norm = gn;
  res.iterations = it;
  res.max_mean_curvature = max_mean_curvature(id, res.mesh, obj.full_gradient(), opts.quadrature);
  res.min_angle_deg = min_triangle_angle_deg(res.mesh);
  return res;
}

MinimizeResult minimize_area_annulus(const SpaceId& id, const BoundaryCurves& curves,
                                     const std::optional<TriMesh>& init, const MinimizeOptions& opts) {
  if (init) return minimize_area(id, *init, opts);
  const int n = static_cast<int>(curves.inner.size());
  const double grading =
      opts.grading > 0.0 ? opts.grading : polyline_length(curves.outer) / polyline_length(curves.inner);
  TriMesh m = ruled_annulus_mesh(curves, id.chart, opts.n_radial, grading);
  if (min_triangle_angle_deg(m) < opts.min_angle_deg) {
    // Rings matched to the angular spacing give nearly square cells.
    const int rings = std::max(2, static_cast<int>(std::lround(std::log(grading) * n / (2.0 * std::numbers::pi))) + 1);
    TriMesh alt = ruled_annulus_mesh(curves, id.chart, rings, grading);
    if (min_triangle_angle_deg(alt) > min_triangle_angle_deg(m)) m = std::move(alt);
  }
  return minimize_area(id, std::move(m), opts);
}

}  // namespace homegeo
