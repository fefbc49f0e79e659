#pragma once

#include "homegeo/graph.hpp"
#include "homegeo/mesh.hpp"
#include "homegeo/surface.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace homegeo {

/// A real value per vertex of a triangle mesh.
struct DiscreteSurfaceFunction {
  TriMesh mesh;
  std::vector<double> values;

  static DiscreteSurfaceFunction sample(const TriMesh& m, const SurfaceScalarField& f);
  /// Triangulates the grid nodes (chart points) and samples f there.
  static DiscreteSurfaceFunction sample(const GraphGrid& g, const SurfaceScalarField& f);

  void validate() const;
};

/// Triangle mesh on the nodes of a graph grid; boundary flags follow the
/// domain boundary.
TriMesh graph_grid_mesh(const GraphGrid& g);

/// Uniform: 1 per edge. ClampedCotan: (cot a + cot b) / 2 from Riemannian
/// edge lengths, clamped at zero. IntrinsicDelaunay: the same cotan weights
/// after flipping the mesh (with its Riemannian edge lengths) to an intrinsic
/// Delaunay triangulation, where they are nonnegative without clamping.
enum class LaplacianWeights { Uniform, ClampedCotan, IntrinsicDelaunay };

std::string to_string(LaplacianWeights w);
LaplacianWeights parse_laplacian_weights(const std::string& name);

/// Symmetric nonnegative edge weights per vertex: (neighbour, weight).
std::vector<std::vector<std::pair<int, double>>> laplacian_weights(const SpaceId& id, const TriMesh& m,
                                                                    LaplacianWeights kind);

/// (L f)(v) = sum_j w_vj (f_j - f_v) / sum_j w_vj at interior vertices, 0 on
/// the boundary.
std::vector<double> discrete_laplacian(const SpaceId& id, const DiscreteSurfaceFunction& f, LaplacianWeights kind);

struct MaxPrincipleResult {
  enum class Status { Pass, Fail, HypothesisFailed };
  Status status = Status::Fail;
  double interior_max = 0.0;
  double boundary_sup = 0.0;
  double min_laplacian = 0.0;  // over interior vertices
  int worst_vertex = -1;       // most negative Laplacian

  bool passes() const { return status == Status::Pass; }
};

std::string to_string(MaxPrincipleResult::Status s);

/// If L f >= -tol at every interior vertex, checks interior max <= boundary
/// sup + tol; otherwise reports HypothesisFailed. Throws
/// std::invalid_argument when the mesh has no boundary.
MaxPrincipleResult discrete_max_principle_check(const SpaceId& id, const DiscreteSurfaceFunction& f,
                                                LaplacianWeights kind, double tol = 1e-10);

/// Solves L f = q at interior vertices for random sources q in [0, 1] and
/// random boundary values in [-1, 1], so f is discretely subharmonic.
DiscreteSurfaceFunction random_subharmonic_field(const SpaceId& id, const TriMesh& m, LaplacianWeights kind,
                                                 std::mt19937_64& rng);

}  // namespace homegeo
