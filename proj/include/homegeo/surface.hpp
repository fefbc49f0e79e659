#pragma once

#include "homegeo/geometry.hpp"

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>

namespace homegeo {

/// Thrown when a parametrization fails to be an immersion at the evaluation point.
class DegenerateImmersion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position and first/second partials of a parametrized surface at one
/// parameter value, in chart coordinates.
struct SurfaceJet {
  Vec3 x, xu, xv, xuu, xuv, xvv;
};

/// A smooth patch (u, v) -> R^3 in a fixed chart. Derivatives are taken by
/// centred differences with step fd_step.
struct ParamSurface {
  std::function<Vec3(double, double)> eval;
  Chart chart = Chart::Canonical;
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
  double fd_step = 1e-4;

  Point point(double u, double v) const { return Point(eval(u, v), chart); }
};

SurfaceJet jet_at(const ParamSurface& s, double u, double v);
SurfaceJet jet_at(const ParamSurface& s, double u, double v, double h);

/// Full extrinsic data at a point of an immersed surface.
struct SurfaceGeometry {
  Mat2 first;             // induced metric
  Mat2 second;            // second fundamental form w.r.t. normal
  Mat2 shape;             // first^-1 * second
  FrameComponents normal; // unit normal in frame components
  double mean_curvature;  // (1/2) trace(shape)
  double shape_norm;      // sqrt(k1^2 + k2^2)
};

/// Induced metric from first partials. Throws DegenerateImmersion if det <= 0.
Mat2 induced_metric(const SpaceId& id, const Vec3& x, const Vec3& xu, const Vec3& xv);

/// The unit normal in frame components with the orientation convention:
/// positive E3 component, else positive E1 component, else positive E2.
FrameComponents oriented_normal(const FrameComponents& a, const FrameComponents& b);

/// General parametrized-surface formula. Covariant derivatives are assembled
/// in the canonical frame from coordinate second derivatives, the coframe
/// derivative and frame_connection().
SurfaceGeometry surface_geometry(const SpaceId& id, const SurfaceJet& jet);

inline double mean_curvature_from_jet(const SpaceId& id, const SurfaceJet& jet) {
  return surface_geometry(id, jet).mean_curvature;
}

Mat2 induced_metric_at(const SpaceId& id, const ParamSurface& s, double u, double v);
double mean_curvature_at(const SpaceId& id, const ParamSurface& s, double u, double v);
double second_fundamental_norm_at(const SpaceId& id, const ParamSurface& s, double u, double v);

/// A real function on the ambient space, interpreted in a chart. Gradient and
/// Hessian are optional; missing ones are replaced by centred differences.
struct SurfaceScalarField {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  std::function<Mat3(const Vec3&)> hessian;

  static SurfaceScalarField constant(double c);
  /// p -> 1 / p[index] (the 1/s and 1/y1 fields).
  static SurfaceScalarField inverse_coordinate(int index);

  Vec3 grad_at(const Vec3& x) const;
  Mat3 hess_at(const Vec3& x) const;
};

/// Intrinsic Laplacian of f along s in divergence form, centred differences
/// with step h and one Richardson extrapolation (h, h/2).
double laplace_beltrami_at(const SpaceId& id, const ParamSurface& s, const SurfaceScalarField& f, double u,
                           double v, double h = 1e-3);

/// Intrinsic Laplacian from a jet: g^ij (F_ij - Gamma^k_ij F_k) with the
/// intrinsic Christoffel symbols of the induced metric.
double laplace_beltrami_from_jet(const SpaceId& id, const SurfaceJet& jet, const SurfaceScalarField& f);

/// Frame components of X_z = (X_u - i X_v) / 2 for a parametrization declared
/// conformal, with the conformality defect |A1^2 + A2^2 + A3^2|.
struct ConformalQuantities {
  std::array<std::complex<double>, 3> a;
  double defect = 0.0;
};

ConformalQuantities conformal_quantities(const SpaceId& id, const ParamSurface& s, double u, double v);

/// d/dzbar of A_k at (u, v) by centred differences of conformal_quantities().
std::complex<double> conformal_dbar(const SpaceId& id, const ParamSurface& s, int k, double u, double v,
                                    double h = 1e-4);

}  // namespace homegeo
