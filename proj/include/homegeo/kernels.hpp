#pragma once

#include "homegeo/mesh.hpp"

#include <vector>

namespace homegeo {

/// Serial loops are the reference; Parallel evaluates per-element work with
/// OpenMP into buffers and reduces them in the serial order, so both give
/// bitwise identical results.
enum class Exec { Serial, Parallel };

struct MeshAreaGradient {
  double area = 0.0;
  std::vector<Vec3> grad;  // d(area)/d(vertex coordinates), one per vertex
};

MeshAreaGradient mesh_area_gradient(const SpaceId& id, const TriMesh& m, Quadrature q = Quadrature::ThreePoint,
                                    Exec exec = Exec::Parallel);

double mesh_area(const SpaceId& id, const TriMesh& m, Quadrature q, Exec exec);

}  // namespace homegeo
