#pragma once

#include "homegeo/geometry.hpp"
#include "homegeo/isometry.hpp"

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace homegeo {

class InvalidMesh : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Triangle mesh with coordinates in one chart of the ambient space.
/// Boundary vertices are held fixed by the minimizers; the rest are free.
struct TriMesh {
  Chart chart = Chart::Canonical;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<char> boundary;                  // per vertex, 1 on the boundary
  std::vector<std::vector<int>> boundary_loops;  // ordered, closing edge implied

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  Point point(int i) const { return Point(vertices[i], chart); }

  /// Recomputes boundary flags and loops from edges used by exactly one
  /// triangle. Throws InvalidMesh on non-manifold edges or open chains.
  void rebuild_boundary();

  /// Index range and manifoldness checks.
  void validate() const;
};

enum class Quadrature { Centroid = 1, ThreePoint = 3 };

/// Riemannian area of the straight (in chart coordinates) triangle a, b, c.
double triangle_area(const SpaceId& id, const Vec3& a, const Vec3& b, const Vec3& c,
                     Quadrature q = Quadrature::ThreePoint);

/// Area of a triangle and its gradient with respect to the three vertex
/// positions (coordinate components).
struct TriangleAreaGradient {
  double area = 0.0;
  std::array<Vec3, 3> grad;
};

TriangleAreaGradient triangle_area_gradient(const SpaceId& id, const Vec3& a, const Vec3& b, const Vec3& c,
                                            Quadrature q = Quadrature::ThreePoint);

double mesh_area(const SpaceId& id, const TriMesh& m, Quadrature q = Quadrature::ThreePoint);

TriMesh transform_mesh(const SpaceId& id, const Isometry& g, const TriMesh& m);

/// Copy of m with every vertex converted to the requested Nil3 chart.
TriMesh convert_mesh_chart(const TriMesh& m, Chart target);

/// Euclidean interior angles of each triangle in chart coordinates, in degrees.
double min_triangle_angle_deg(const TriMesh& m);

/// Per-vertex one-ring adjacency (sorted, without duplicates).
std::vector<std::vector<int>> vertex_neighbours(const TriMesh& m);

/// OBJ with canonical-chart coordinates and 1-based faces.
void write_obj(std::ostream& os, const TriMesh& m);
void write_obj(const std::string& path, const TriMesh& m);
TriMesh read_obj(std::istream& is);
TriMesh read_obj(const std::string& path);

/// "vertex_index,value" lines with a header.
void write_vertex_csv(std::ostream& os, const std::vector<double>& values);
std::vector<double> read_vertex_csv(std::istream& is);

}  // namespace homegeo
