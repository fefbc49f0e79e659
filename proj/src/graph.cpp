#include "homegeo/graph.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace homegeo {

GraphDomain GraphDomain::disk(double R, int n_angular, int n_radial) {
  GraphDomain d;
  d.kind = Kind::Disk;
  d.r = 0.0;
  d.R = R;
  d.n_angular = n_angular;
  d.n_radial = n_radial;
  d.validate();
  return d;
}

GraphDomain GraphDomain::annulus(double r, double R, int n_angular, int n_radial, Spacing spacing) {
  GraphDomain d;
  d.kind = Kind::Annulus;
  d.r = r;
  d.R = R;
  d.n_angular = n_angular;
  d.n_radial = n_radial;
  d.spacing = spacing;
  d.validate();
  return d;
}

GraphDomain GraphDomain::rectangle(double x0, double x1, double y0, double y1, int nx, int ny) {
  GraphDomain d;
  d.kind = Kind::Rectangle;
  d.x0 = x0;
  d.x1 = x1;
  d.y0 = y0;
  d.y1 = y1;
  d.n_angular = nx;
  d.n_radial = ny;
  d.validate();
  return d;
}

void GraphDomain::validate() const {
  if (n_angular < 8 || n_radial < 8) throw GraphError("grid resolution must be at least 8 per axis");
  switch (kind) {
    case Kind::Disk:
      if (!(R > 0.0)) throw GraphError("disk radius must be positive");
      break;
    case Kind::Annulus:
      if (!(r > 0.0 && r < R)) throw GraphError("annulus needs 0 < r < R");
      break;
    case Kind::Rectangle:
      if (!(x1 > x0 && y1 > y0)) throw GraphError("rectangle has empty extent");
      break;
  }
}

int GraphDomain::num_nodes() const {
  const int ring_nodes = n_angular * n_radial;
  return kind == Kind::Disk ? ring_nodes + 1 : ring_nodes;
}

double GraphDomain::ring_radius(int j) const {
  if (kind == Kind::Disk) return R * (j + 1) / n_radial;
  const double t = static_cast<double>(j) / (n_radial - 1);
  if (spacing == Spacing::Geometric) return r * std::pow(R / r, t);
  return r + (R - r) * t;
}

namespace {

struct PolarIndex {
  int ring, sector;
};

// Ring/sector of a polar node; ring == -1 is the disk centre.
PolarIndex polar_index(const GraphDomain& d, int k) {
  if (d.kind == GraphDomain::Kind::Disk) {
    if (k == 0) return {-1, 0};
    --k;
  }
  return {k / d.n_angular, k % d.n_angular};
}

int polar_node(const GraphDomain& d, int ring, int sector) {
  const int n = d.n_angular;
  sector = ((sector % n) + n) % n;
  if (d.kind == GraphDomain::Kind::Disk) return ring < 0 ? 0 : 1 + ring * n + sector;
  return ring * n + sector;
}

double dtheta(const GraphDomain& d) { return 2.0 * std::numbers::pi / d.n_angular; }

}  // namespace

Vec2 GraphDomain::node(int k) const {
  if (kind == Kind::Rectangle) {
    const int i = k % n_angular, j = k / n_angular;
    return {x0 + (x1 - x0) * i / (n_angular - 1), y0 + (y1 - y0) * j / (n_radial - 1)};
  }
  const PolarIndex p = polar_index(*this, k);
  if (p.ring < 0) return Vec2::Zero();
  const double rho = ring_radius(p.ring), th = p.sector * dtheta(*this);
  return {rho * std::cos(th), rho * std::sin(th)};
}

bool GraphDomain::is_boundary(int k) const {
  if (kind == Kind::Rectangle) {
    const int i = k % n_angular, j = k / n_angular;
    return i == 0 || j == 0 || i == n_angular - 1 || j == n_radial - 1;
  }
  const PolarIndex p = polar_index(*this, k);
  if (p.ring < 0) return false;
  return p.ring == n_radial - 1 || (kind == Kind::Annulus && p.ring == 0);
}

std::vector<int> GraphDomain::interior_nodes() const {
  std::vector<int> out;
  for (int k = 0; k < num_nodes(); ++k)
    if (!is_boundary(k)) out.push_back(k);
  return out;
}

std::vector<int> GraphDomain::boundary_nodes() const {
  std::vector<int> out;
  for (int k = 0; k < num_nodes(); ++k)
    if (is_boundary(k)) out.push_back(k);
  return out;
}

GraphAxis default_axis(Space s) { return s == Space::Nil3 ? GraphAxis::NilXi : GraphAxis::SolS; }

Vec3 GraphGrid::point(int k) const {
  const Vec2 p = domain.node(k);
  return {p[0], p[1], heights[k]};
}

namespace {

void check_grid(const GraphGrid& g) {
  g.domain.validate();
  if (static_cast<int>(g.heights.size()) != g.domain.num_nodes())
    throw GraphError("height count does not match the domain");
  if (g.space.chart != Chart::Canonical) throw GraphError("graphs are defined in the canonical chart");
  if ((g.axis == GraphAxis::NilXi) != (g.space.space == Space::Nil3))
    throw GraphError("graph axis does not belong to the space");
}

// Three-point weights for first and second derivatives on a non-uniform line.
struct ThreePoint {
  double d1[3], d2[3];
};

ThreePoint three_point(double hm, double hp) {
  if (!(hm > 0.0 && hp > 0.0)) throw GraphError("degenerate grid spacing");
  ThreePoint w;
  w.d1[0] = -hp / (hm * (hm + hp));
  w.d1[1] = (hp - hm) / (hm * hp);
  w.d1[2] = hm / (hp * (hm + hp));
  w.d2[0] = 2.0 / (hm * (hm + hp));
  w.d2[1] = -2.0 / (hm * hp);
  w.d2[2] = 2.0 / (hp * (hm + hp));
  return w;
}

// Sixth-order periodic differences in the angular direction, on the seven
// values f[-3..3] stored at f[0..6].
double dth1(const double f[7], double h) {
  return ((f[6] - f[0]) / 60.0 - 0.15 * (f[5] - f[1]) + 0.75 * (f[4] - f[2])) / h;
}
double dth2(const double f[7], double h) {
  return ((f[6] + f[0]) / 90.0 - 0.15 * (f[5] + f[1]) + 1.5 * (f[4] + f[2]) - 49.0 / 18.0 * f[3]) / (h * h);
}

// Height derivatives of the disk centre from the Fourier modes 0..2 of the first ring.
SurfaceJet centre_jet(const GraphGrid& g) {
  const GraphDomain& d = g.domain;
  const int n = d.n_angular;
  const double rho = d.ring_radius(0);
  const double f0 = g.heights[0];
  double m0 = 0, c1 = 0, s1 = 0, c2 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double th = i * dtheta(d), f = g.heights[polar_node(d, 0, i)] - f0;
    m0 += f;
    c1 += f * std::cos(th);
    s1 += f * std::sin(th);
    c2 += f * std::cos(2.0 * th);
    s2 += f * std::sin(2.0 * th);
  }
  m0 /= n;
  c1 *= 2.0 / n;
  s1 *= 2.0 / n;
  c2 *= 2.0 / n;
  s2 *= 2.0 / n;
  const double lap_half = m0 / (rho * rho);  // f ~ f0 + c (x^2 + y^2) + ...
  SurfaceJet j;
  j.x = Vec3(0, 0, f0);
  j.xu = Vec3(1, 0, c1 / rho);
  j.xv = Vec3(0, 1, s1 / rho);
  j.xuu = Vec3(0, 0, 2.0 * lap_half + 2.0 * c2 / (rho * rho));
  j.xvv = Vec3(0, 0, 2.0 * lap_half - 2.0 * c2 / (rho * rho));
  j.xuv = Vec3(0, 0, 2.0 * s2 / (rho * rho));
  return j;
}

}  // namespace

SurfaceJet graph_jet(const GraphGrid& g, int k) {
  const GraphDomain& d = g.domain;
  if (d.is_boundary(k)) throw GraphError("graph_jet is only defined at interior nodes");
  const auto& f = g.heights;
  if (d.kind == GraphDomain::Kind::Rectangle) {
    const int nx = d.n_angular;
    const double hx = (d.x1 - d.x0) / (nx - 1), hy = (d.y1 - d.y0) / (d.n_radial - 1);
    if (!(hx > 0.0 && hy > 0.0)) throw GraphError("degenerate grid spacing");
    const double c = 0.0, e = f[k + 1] - f[k], w = f[k - 1] - f[k], n = f[k + nx] - f[k], s = f[k - nx] - f[k];
    const Vec2 p = d.node(k);
    SurfaceJet j;
    j.x = Vec3(p[0], p[1], f[k]);
    j.xu = Vec3(1, 0, (e - w) / (2.0 * hx));
    j.xv = Vec3(0, 1, (n - s) / (2.0 * hy));
    j.xuu = Vec3(0, 0, (e - 2.0 * c + w) / (hx * hx));
    j.xvv = Vec3(0, 0, (n - 2.0 * c + s) / (hy * hy));
    j.xuv = Vec3(0, 0, (f[k + nx + 1] - f[k + nx - 1] - f[k - nx + 1] + f[k - nx - 1]) / (4.0 * hx * hy));
    return j;
  }
  const PolarIndex p = polar_index(d, k);
  if (p.ring < 0) return centre_jet(g);
  const double h = dtheta(d);
  const double rho = d.ring_radius(p.ring);
  const double rho_m = p.ring == 0 ? 0.0 : d.ring_radius(p.ring - 1);
  const ThreePoint w = three_point(rho - rho_m, d.ring_radius(p.ring + 1) - rho);

  // Heights relative to the node itself, so constant data differentiates to
  // exact zeros.
  double rows[3][7];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 7; ++b) rows[a][b] = f[polar_node(d, p.ring - 1 + a, p.sector - 3 + b)] - f[k];
  double f_r = 0, f_rr = 0, f_rt = 0;
  for (int a = 0; a < 3; ++a) {
    f_r += w.d1[a] * rows[a][3];
    f_rr += w.d2[a] * rows[a][3];
    f_rt += w.d1[a] * dth1(rows[a], h);
  }
  // On the first disk ring the inner row is the centre repeated, so its
  // angular derivative vanishes as it should.
  const double th = p.sector * h, c = std::cos(th), s = std::sin(th);
  SurfaceJet j;
  j.x = Vec3(rho * c, rho * s, f[k]);
  j.xu = Vec3(c, s, f_r);
  j.xv = Vec3(-rho * s, rho * c, dth1(rows[1], h));
  j.xuu = Vec3(0, 0, f_rr);
  j.xuv = Vec3(-s, c, f_rt);
  j.xvv = Vec3(-rho * c, -rho * s, dth2(rows[1], h));
  return j;
}

std::vector<double> graph_residual(const GraphGrid& g, Exec exec) {
  check_grid(g);
  const std::vector<int> nodes = g.domain.interior_nodes();
  const auto n = static_cast<long>(nodes.size());
  std::vector<double> out(n);
  if (exec == Exec::Serial) {
    for (long a = 0; a < n; ++a) out[a] = mean_curvature_from_jet(g.space, graph_jet(g, nodes[a]));
    return out;
  }
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (long a = 0; a < n; ++a) {
    try {
      out[a] = mean_curvature_from_jet(g.space, graph_jet(g, nodes[a]));
    } catch (const std::exception&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) {
    // Re-run serially to surface the original error.
    for (long a = 0; a < n; ++a) out[a] = mean_curvature_from_jet(g.space, graph_jet(g, nodes[a]));
  }
  return out;
}

namespace {

// Nodes whose heights enter the residual at interior node k.
std::vector<int> dependencies(const GraphDomain& d, int k) {
  std::vector<int> out;
  if (d.kind == GraphDomain::Kind::Rectangle) {
    const int nx = d.n_angular;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) out.push_back(k + dj * nx + di);
    return out;
  }
  const PolarIndex p = polar_index(d, k);
  if (p.ring < 0) {
    out.push_back(0);
    for (int i = 0; i < d.n_angular; ++i) out.push_back(polar_node(d, 0, i));
    return out;
  }
  for (int a = -1; a <= 1; ++a)
    for (int b = -3; b <= 3; ++b) {
      if (p.ring + a < 0) continue;
      out.push_back(polar_node(d, p.ring + a, p.sector + b));
    }
  if (d.kind == GraphDomain::Kind::Disk && p.ring == 0) out.push_back(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Greedy colouring of the interior unknowns such that no two unknowns of one
// colour enter the same residual row.
std::vector<int> colour_columns(const GraphDomain& d, const std::vector<int>& interior,
                                const std::vector<int>& slot, std::vector<std::vector<int>>& col_rows) {
  const int n = static_cast<int>(interior.size());
  col_rows.assign(n, {});
  std::vector<std::vector<int>> row_cols(n);
  for (int a = 0; a < n; ++a)
    for (int dep : dependencies(d, interior[a]))
      if (slot[dep] >= 0) {
        row_cols[a].push_back(slot[dep]);
        col_rows[slot[dep]].push_back(a);
      }
  std::vector<int> colour(n, -1);
  std::vector<int> mark;
  for (int c = 0; c < n; ++c) {
    for (int row : col_rows[c])
      for (int other : row_cols[row])
        if (colour[other] >= 0) {
          if (static_cast<int>(mark.size()) <= colour[other]) mark.resize(colour[other] + 1, -1);
          mark[colour[other]] = c;
        }
    int pick = 0;
    while (pick < static_cast<int>(mark.size()) && mark[pick] == c) ++pick;
    colour[c] = pick;
  }
  return colour;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> harmonic_extension(const GraphDomain& d, const DirichletData& boundary) {
  d.validate();
  const int nn = d.num_nodes();
  std::vector<int> slot(nn, -1);
  std::vector<int> interior = d.interior_nodes();
  for (int a = 0; a < static_cast<int>(interior.size()); ++a) slot[interior[a]] = a;
  std::vector<double> f(nn, 0.0);
  for (int k : d.boundary_nodes()) {
    const Vec2 p = d.node(k);
    f[k] = boundary(p[0], p[1]);
    if (!std::isfinite(f[k])) throw GraphError("boundary data is not finite");
  }
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(interior.size());
  auto add = [&](int row, int node, double w) {
    if (slot[node] >= 0)
      trip.emplace_back(row, slot[node], w);
    else
      rhs[row] -= w * f[node];
  };
  for (int a = 0; a < static_cast<int>(interior.size()); ++a) {
    const int k = interior[a];
    if (d.kind == GraphDomain::Kind::Rectangle) {
      const int nx = d.n_angular;
      const double hx = (d.x1 - d.x0) / (nx - 1), hy = (d.y1 - d.y0) / (d.n_radial - 1);
      add(a, k - 1, 1.0 / (hx * hx));
      add(a, k + 1, 1.0 / (hx * hx));
      add(a, k - nx, 1.0 / (hy * hy));
      add(a, k + nx, 1.0 / (hy * hy));
      add(a, k, -2.0 / (hx * hx) - 2.0 / (hy * hy));
      continue;
    }
    const PolarIndex p = polar_index(d, k);
    if (p.ring < 0) {
      const double rho = d.ring_radius(0);
      for (int i = 0; i < d.n_angular; ++i) add(a, polar_node(d, 0, i), 4.0 / (rho * rho * d.n_angular));
      add(a, 0, -4.0 / (rho * rho));
      continue;
    }
    const double h = dtheta(d), rho = d.ring_radius(p.ring);
    const double rho_m = p.ring == 0 ? 0.0 : d.ring_radius(p.ring - 1);
    const ThreePoint w = three_point(rho - rho_m, d.ring_radius(p.ring + 1) - rho);
    for (int q = 0; q < 3; ++q) {
      const int node = polar_node(d, p.ring - 1 + q, p.sector);
      add(a, node, w.d2[q] + w.d1[q] / rho);
    }
    const double ang = 1.0 / (rho * rho * h * h);
    add(a, polar_node(d, p.ring, p.sector - 1), ang);
    add(a, polar_node(d, p.ring, p.sector + 1), ang);
    add(a, k, -2.0 * ang);
  }
  Eigen::SparseMatrix<double> A(interior.size(), interior.size());
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw GraphError("harmonic extension: factorization failed");
  const Eigen::VectorXd x = lu.solve(rhs);
  for (int a = 0; a < static_cast<int>(interior.size()); ++a) f[interior[a]] = x[a];
  return f;
}

GraphGrid solve_minimal_graph(const GraphDomain& d, const SpaceId& space, const DirichletData& boundary,
                              const GraphSolveOptions& opts, const std::vector<double>* initial,
                              GraphSolveReport* report) {
  GraphGrid g;
  g.domain = d;
  g.space = space;
  g.axis = default_axis(space.space);
  g.heights = harmonic_extension(d, boundary);
  if (initial) {
    if (static_cast<int>(initial->size()) != d.num_nodes()) throw GraphError("initial guess has wrong size");
    for (int k : d.interior_nodes()) g.heights[k] = (*initial)[k];
  }
  check_grid(g);

  const std::vector<int> interior = d.interior_nodes();
  const int n = static_cast<int>(interior.size());
  std::vector<int> slot(d.num_nodes(), -1);
  for (int a = 0; a < n; ++a) slot[interior[a]] = a;
  std::vector<std::vector<int>> col_rows;
  const std::vector<int> colour = colour_columns(d, interior, slot, col_rows);
  const int n_colours = n ? *std::max_element(colour.begin(), colour.end()) + 1 : 0;

  GraphSolveReport rep;
  std::vector<double> F = graph_residual(g, opts.exec);
  double norm = max_abs(F);
  rep.residual_history.push_back(norm);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analysed = false;
  int it = 0;
  while (norm > opts.tol && it < opts.max_iter) {
    ++it;
    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < n_colours; ++c) {
      GraphGrid pert = g;
      std::vector<double> step(n, 0.0);
      for (int a = 0; a < n; ++a)
        if (colour[a] == c) {
          step[a] = 1e-7 * std::max(1.0, std::abs(g.heights[interior[a]]));
          pert.heights[interior[a]] += step[a];
        }
      const std::vector<double> Fp = graph_residual(pert, opts.exec);
      for (int a = 0; a < n; ++a)
        if (colour[a] == c)
          for (int row : col_rows[a]) trip.emplace_back(row, a, (Fp[row] - F[row]) / step[a]);
    }
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    if (!analysed) {
      lu.analyzePattern(J);
      analysed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw GraphConvergenceError("singular Newton Jacobian", norm);
    const Eigen::VectorXd delta = lu.solve(-Eigen::Map<const Eigen::VectorXd>(F.data(), n));

    double t = 1.0;
    GraphGrid trial = g;
    std::vector<double> Ft;
    double nt = norm;
    for (int halving = 0; halving <= 10; ++halving) {
      for (int a = 0; a < n; ++a) trial.heights[interior[a]] = g.heights[interior[a]] + t * delta[a];
      try {
        Ft = graph_residual(trial, opts.exec);
        nt = max_abs(Ft);
      } catch (const DegenerateImmersion&) {
        nt = std::numeric_limits<double>::infinity();
      }
      if (!opts.damping || nt < norm) break;
      t *= 0.5;
    }
    if (!std::isfinite(nt)) throw GraphConvergenceError("Newton step left the immersion domain", norm);
    g = std::move(trial);
    F = std::move(Ft);
    norm = nt;
    rep.residual_history.push_back(norm);
  }
  rep.iterations = it;
  rep.residual = norm;
  if (report) *report = rep;
  if (norm > opts.tol) {
    std::ostringstream msg;
    msg << "minimal graph solve did not converge in " << opts.max_iter << " iterations (residual " << norm << ")";
    throw GraphConvergenceError(msg.str(), norm);
  }
  return g;
}

GraphDifference graph_difference_report(const GraphGrid& u, const GraphGrid& v) {
  if (!(u.domain == v.domain) || !(u.space == v.space) || u.heights.size() != v.heights.size())
    throw GraphError("graphs do not share a domain and space");
  GraphDifference out;
  bool pos = false, neg = false;
  for (int k = 0; k < u.domain.num_nodes(); ++k) {
    const double diff = u.heights[k] - v.heights[k];
    double& gap = u.domain.is_boundary(k) ? out.max_boundary_gap : out.max_interior_gap;
    gap = std::max(gap, std::abs(diff));
    pos = pos || diff > 0.0;
    neg = neg || diff < 0.0;
  }
  out.monotone = !(pos && neg);
  return out;
}

double graph_laplace_beltrami(const GraphGrid& g, int k, const SurfaceScalarField& f) {
  check_grid(g);
  return laplace_beltrami_from_jet(g.space, graph_jet(g, k), f);
}

void write_graph_csv(std::ostream& os, const GraphGrid& g) {
  os << "x1,x2,height\n" << std::setprecision(17);
  for (int k = 0; k < g.domain.num_nodes(); ++k) {
    const Vec2 p = g.domain.node(k);
    os << p[0] << ',' << p[1] << ',' << g.heights[k] << '\n';
  }
}

std::vector<double> read_graph_csv(std::istream& is, const GraphDomain& d) {
  std::vector<double> h;
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
      throw GraphError("malformed graph CSV line: " + line);
    const Vec2 p = d.node(static_cast<int>(h.size()));
    if (std::abs(std::stod(a) - p[0]) > 1e-9 || std::abs(std::stod(b) - p[1]) > 1e-9)
      throw GraphError("graph CSV node coordinates do not match the domain");
    h.push_back(std::stod(c));
  }
  if (static_cast<int>(h.size()) != d.num_nodes()) throw GraphError("graph CSV has the wrong node count");
  return h;
}

}  // namespace homegeo
