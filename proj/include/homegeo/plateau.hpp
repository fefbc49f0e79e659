#pragma once

#include "homegeo/geometry.hpp"
#include "homegeo/isometry.hpp"
#include "homegeo/kernels.hpp"
#include "homegeo/mesh.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace homegeo {

/// An entire minimal graph x3 = g(x1, x2) of Nil3 given by a formula.
struct EntireGraph {
  std::string name = "zero";
  std::function<double(double, double)> f = [](double, double) { return 0.0; };

  static EntireGraph zero();
  static EntireGraph saddle();  // x3 = x1 x2 / 2
  static EntireGraph from_name(const std::string& name);
};

/// The reference surface and the two boundary circles of one experiment.
///
/// Region coordinates (a, b, t): (a, b) is the position on the reference
/// surface, t the level of the translated copy it lies on.
///   SolSpecialPlane   (a, b, t) -> (a, b, t)               height = s
///   NilVerticalPlane  (a, b, t) -> (t, a, b) in NilY        height = y1
///   NilEntireGraph    (a, b, t) -> (a, b, g(a, b) + t)      height = x3 - g
struct RegionSpec {
  enum class Reference { SolSpecialPlane, NilVerticalPlane, NilEntireGraph };

  Reference reference = Reference::SolSpecialPlane;
  EntireGraph graph;
  double r = 1.0, R = 4.0, eps = 0.1, h = 1.0;

  static RegionSpec sol(double r, double R, double eps, double h = 1.0);
  static RegionSpec nil_graph(double r, double R, double eps, EntireGraph g = EntireGraph::zero(), double h = 0.0);
  static RegionSpec nil_vertical(double r, double R, double eps, double h = 1.0);

  SpaceId space() const;
  /// Throws std::invalid_argument on bad radii, negative offset or a
  /// reference graph that fails the minimality residual check.
  void validate() const;

  Vec3 lift(double a, double b, double t) const;
  /// Inverse of lift: (a, b, height).
  Vec3 region_coords(const Vec3& x) const;
  double height(const Vec3& x) const { return region_coords(x)[2]; }
  /// Frame index of the graph direction: E3 (Sol3, entire graphs) or E1.
  int graph_frame_axis() const;
};

std::string to_string(RegionSpec::Reference r);
RegionSpec::Reference parse_reference(const std::string& name);

/// Closed polyline in chart coordinates; the closing edge is implied.
using Polyline = std::vector<Vec3>;

struct BoundaryCurves {
  Polyline inner;  // radius r at level h + eps
  Polyline outer;  // radius R at level h
};

BoundaryCurves boundary_curves(const RegionSpec& spec, int resolution);

/// Boundary circles sampled at uniform Riemannian arc length, with the
/// edges no longer than `spacing` (at least 16 points).
BoundaryCurves boundary_curves_by_spacing(const RegionSpec& spec, double spacing);

/// Unstructured annulus mesh that is close to isotropic in the metric:
/// boundary_curves_by_spacing plus a hexagonal lattice in coordinates where
/// the mid-level induced metric at the centre is Euclidean, Delaunay
/// triangulated there. Free vertices start on log-radially interpolated
/// levels. Throws InvalidMesh if a boundary edge is not recovered.
TriMesh isotropic_annulus_mesh(const RegionSpec& spec, double spacing);

/// Annulus mesh between two closed polylines with the same number of points.
/// Ring j interpolates linearly in chart coordinates between inner[i] and
/// outer[i] at parameter tau_j = (grading^(j/(n-1)) - 1) / (grading - 1)
/// (uniform for grading == 1). Triangles are oriented counterclockwise in
/// region coordinates.
TriMesh ruled_annulus_mesh(const BoundaryCurves& curves, Chart chart, int n_radial, double grading);

/// The default ruled mesh for a spec: geometric grading with ratio R / r.
TriMesh ruled_annulus_mesh(const RegionSpec& spec, int n_angular, int n_radial);

/// Admissible vertex motion. GraphAxis moves each free vertex along the
/// coordinate line of the graph direction (x3 or s in canonical charts, y1 in
/// the NilY chart); Free moves it in all three coordinates.
enum class Motion { GraphAxis, Free };

/// Coordinate index moved under Motion::GraphAxis for a chart.
int graph_axis_coordinate(Chart chart);

struct MinimizeOptions {
  int max_iter = 20000;
  double grad_tol = 5e-7;
  Motion motion = Motion::GraphAxis;
  int n_radial = 32;       // auto initial mesh only
  double grading = 0.0;    // auto initial mesh; 0 picks outer/inner radius ratio
  int lbfgs_memory = 12;
  double armijo = 1e-4;
  double min_angle_deg = 15.0;
  double area_floor = 1e-12;
  Quadrature quadrature = Quadrature::ThreePoint;
  Exec exec = Exec::Parallel;
  bool keep_history = true;
};

struct MinimizeResult {
  TriMesh mesh;
  double area = 0.0;
  double grad_norm = 0.0;    // Riemannian norm over free vertices
  double max_mean_curvature = 0.0;  // |area gradient| / (2 * one-third star area), over free vertices
  double min_angle_deg = 0.0;
  int iterations = 0;
  std::vector<double> area_history;
};

class MinimizeError : public std::runtime_error {
 public:
  MinimizeError(const std::string& what, double last, TriMesh mesh = {})
      : std::runtime_error(what), last_grad_norm(last), last_mesh(std::move(mesh)) {}
  double last_grad_norm;
  TriMesh last_mesh;
};

/// A triangle fell below the area floor; the caller should remesh.
class RemeshNeeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Riemannian norm of a vertex gradient over the non-boundary vertices,
/// restricted to the admissible motion: sqrt(sum_v g_v^T G(p_v)^-1 g_v) for
/// Free, sqrt(sum_v g_vk^2 / G_kk) along coordinate k for GraphAxis.
double riemannian_gradient_norm(const SpaceId& id, const TriMesh& m, const std::vector<Vec3>& grad,
                                Motion motion = Motion::Free);

/// Largest area decrease over `trials` random single-vertex perturbations of
/// Riemannian length delta in the admissible motion (random sign along the
/// axis, or a random direction for Free). Only the star of the moved vertex
/// is re-evaluated.
double worst_perturbation_decrease(const SpaceId& id, const TriMesh& m, int trials, double delta,
                                   unsigned long long seed, Motion motion = Motion::GraphAxis,
                                   Quadrature q = Quadrature::ThreePoint);

/// Limited-memory BFGS on mesh_area over the non-boundary vertices, with the
/// inverse metric at each vertex as the initial inverse Hessian and a
/// backtracking Armijo line search. Boundary vertices stay fixed.
/// When init is empty the ruled mesh between the curves is used; it is
/// rebuilt with rings matched to the angular spacing if its smallest angle is
/// below opts.min_angle_deg.
MinimizeResult minimize_area_annulus(const SpaceId& id, const BoundaryCurves& curves,
                                     const std::optional<TriMesh>& init, const MinimizeOptions& opts = {});

/// Continues minimization from an existing mesh (boundary flags decide what
/// stays fixed).
MinimizeResult minimize_area(const SpaceId& id, TriMesh mesh, const MinimizeOptions& opts = {});

struct DouglasAreas {
  double area_lateral = 0.0;
  double area_disk_bottom = 0.0;  // radius r at level h
  double area_disk_top = 0.0;     // radius r at level h + eps
  bool inequality_holds = false;  // lateral < bottom + top
};

/// Areas by adaptive Gauss-Kronrod quadrature on the exact parametrizations.
DouglasAreas douglas_areas(const RegionSpec& spec);

/// Barycentric height of the mesh over region point (a, b), if some triangle
/// covers it in the (a, b) projection.
std::optional<double> height_over(const RegionSpec& spec, const TriMesh& m, double a, double b);

struct HeightProfileRow {
  double radius, mean, min, max;
};

/// Height statistics over circles of the given radii, sampled at n_samples
/// angles each.
std::vector<HeightProfileRow> height_profile(const RegionSpec& spec, const TriMesh& m,
                                             const std::vector<double>& radii, int n_samples = 256);

struct SlabReport {
  struct Entry {
    double R = 0.0;
    double slab_min = 0.0, slab_max = 0.0;
    bool in_slab = false;
    double inner_gap = 0.0;  // min height on the sample circle minus h
    std::vector<double> samples;  // heights at the sample radius
  };
  std::vector<Entry> entries;
  bool all_in_slab = false;
  bool monotone = false;  // sample heights non-decreasing in R within tol
  double worst_monotone_violation = 0.0;
  bool gaps_positive = false;
};

/// meshes[i] must be the minimized annulus for outer radius Rs[i]; Rs must be
/// increasing and all meshes share spec.r, spec.eps and spec.h.
SlabReport slab_and_monotonicity_check(const RegionSpec& spec, const std::vector<TriMesh>& meshes,
                                       const std::vector<double>& Rs, double sample_radius,
                                       double slab_tol = 1e-3, double monotone_tol = 1e-3, int n_samples = 64);

struct GraphnessReport {
  bool is_graph = false;
  double min_normal_component = 0.0;  // signed so that the majority sign is positive
  bool projection_injective = false;
};

/// Unit normal component along frame axis `axis` for every triangle, plus a
/// sampled injectivity test of the projection along that axis.
GraphnessReport graphness_check(const SpaceId& id, const TriMesh& m, int axis);

struct SweepFamily {
  enum class Generator { SolTMinus, NilVerticalDown, NilPhiMinus };
  Generator generator = Generator::SolTMinus;
  double c_max = 0.1;

  /// g_c; g_0 is the identity.
  Isometry at(double c) const;
  static SweepFamily for_spec(const RegionSpec& spec, double c_max);
};

struct SweepOptions {
  double c_step = 1e-3;
  double refine_tol = 1e-6;
  double contact_threshold = 1e-4;
};

struct SweepResult {
  enum class Kind { Interior, Boundary, None };
  double c_star = 0.0;
  Kind contact_kind = Kind::None;
  Vec3 contact_point = Vec3::Zero();  // on the translated mesh
  double boundary_distance = 0.0;     // chart distance from contact point to the translated boundary
  bool saturated = false;             // contact persists at c_max
  bool disjoint_beyond_range = true;  // checked one step past c_max
};

std::string to_string(SweepResult::Kind k);

class SweepAmbiguous : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest c in [0, c_max] for which g_c(M) comes within the contact
/// threshold of the test mesh, and where the contact happens.
SweepResult sweep_contact(const SpaceId& id, const TriMesh& M, const TriMesh& test, const SweepFamily& family,
                          const SweepOptions& opts = {});

/// Minimum chart distance between two triangle meshes, with the closest pair.
struct MeshDistance {
  double distance = 0.0;
  Vec3 on_first = Vec3::Zero(), on_second = Vec3::Zero();
  int first_triangle = -1;
};
MeshDistance mesh_distance(const TriMesh& a, const TriMesh& b, double cutoff);

/// Triangle mesh of the region {rho_in <= |(a, b)| <= rho_out} of the
/// reference surface at level t (rho_in may be 0 for a disk).
TriMesh reference_patch_mesh(const RegionSpec& spec, double t, double rho_in, double rho_out, int n_angular,
                             int n_radial);

}  // namespace homegeo
