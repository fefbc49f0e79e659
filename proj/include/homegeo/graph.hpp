#pragma once

#include "homegeo/geometry.hpp"
#include "homegeo/kernels.hpp"
#include "homegeo/surface.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace homegeo {

/// Structured grid over a planar domain in the (x1, x2) coordinates.
/// Polar layouts (Disk, Annulus) store node (ring j, sector i) at
/// j * n_angular + i; a Disk has one extra centre node at index 0 and its
/// rings start at index 1. Rectangle nodes are (row j, column i) at j * nx + i.
struct GraphDomain {
  enum class Kind { Disk, Annulus, Rectangle };
  enum class Spacing { Uniform, Geometric };

  Kind kind = Kind::Annulus;
  double r = 1.0, R = 3.0;                          // Disk uses R only
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;  // Rectangle
  int n_angular = 64;  // or nx
  int n_radial = 64;   // rings including boundary rings, or ny
  Spacing spacing = Spacing::Uniform;

  static GraphDomain disk(double R, int n_angular, int n_radial);
  static GraphDomain annulus(double r, double R, int n_angular, int n_radial,
                             Spacing spacing = Spacing::Uniform);
  static GraphDomain rectangle(double x0, double x1, double y0, double y1, int nx, int ny);

  void validate() const;
  int num_nodes() const;
  Vec2 node(int k) const;
  bool is_boundary(int k) const;
  std::vector<int> interior_nodes() const;
  std::vector<int> boundary_nodes() const;
  /// Radius of ring j (polar kinds); ring 0 of a Disk is the first ring.
  double ring_radius(int j) const;

  bool operator==(const GraphDomain&) const = default;
};

enum class GraphAxis { NilXi, SolS };

struct GraphGrid {
  GraphDomain domain;
  SpaceId space = SpaceId::nil3();
  GraphAxis axis = GraphAxis::NilXi;
  std::vector<double> heights;

  /// Chart point (x1, x2, height) of node k.
  Vec3 point(int k) const;
};

GraphAxis default_axis(Space s);

/// Degenerate spacing or inconsistent grid.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton failed to reach the tolerance.
class GraphConvergenceError : public GraphError {
 public:
  GraphConvergenceError(const std::string& what, double last) : GraphError(what), last_residual(last) {}
  double last_residual;
};

/// Mean curvature of the graph surface at every interior node, ordered as
/// domain.interior_nodes(). Height derivatives come from finite differences
/// on the grid; the planar parts of the parametrization are exact.
std::vector<double> graph_residual(const GraphGrid& g, Exec exec = Exec::Parallel);

/// Second derivatives of the height at a node, as a SurfaceJet of the graph
/// parametrization (polar (rho, theta) on polar grids, (x1, x2) otherwise).
SurfaceJet graph_jet(const GraphGrid& g, int k);

struct GraphSolveOptions {
  int max_iter = 50;
  double tol = 1e-8;
  bool damping = true;
  Exec exec = Exec::Parallel;
};

struct GraphSolveReport {
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
};

using DirichletData = std::function<double(double x1, double x2)>;

/// Harmonic extension of boundary data with the flat polar or Cartesian
/// 5-point Laplacian; used as the Newton starting point.
std::vector<double> harmonic_extension(const GraphDomain& d, const DirichletData& boundary);

/// Damped Newton on the discrete minimal-graph equation. The Jacobian is
/// assembled by coloured finite differences of graph_residual(). If initial
/// is given its interior values are used instead of the harmonic extension.
GraphGrid solve_minimal_graph(const GraphDomain& d, const SpaceId& space, const DirichletData& boundary,
                              const GraphSolveOptions& opts = {}, const std::vector<double>* initial = nullptr,
                              GraphSolveReport* report = nullptr);

struct GraphDifference {
  double max_interior_gap = 0.0;
  double max_boundary_gap = 0.0;
  bool monotone = true;  // u - v has a constant sign at all nodes
};

GraphDifference graph_difference_report(const GraphGrid& u, const GraphGrid& v);

/// Intrinsic Laplacian of f along the graph at interior node k.
double graph_laplace_beltrami(const GraphGrid& g, int k, const SurfaceScalarField& f);

/// "x1,x2,height" with a header; heights in node order.
void write_graph_csv(std::ostream& os, const GraphGrid& g);
std::vector<double> read_graph_csv(std::istream& is, const GraphDomain& d);

}  // namespace homegeo
