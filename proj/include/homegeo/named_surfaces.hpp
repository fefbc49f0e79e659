#pragma once

#include "homegeo/surface.hpp"

#include <string>
#include <vector>

namespace homegeo::surfaces {

/// Sol3 special plane s = t over (x1, x2) in [-half, half]^2.
ParamSurface sol_special_plane(double t, double half = 1.0);

/// Sol3 plane x_j = t (j = 1 or 2), parametrized by the remaining coordinates.
ParamSurface sol_coordinate_plane(int j, double t, double half = 1.0);

/// Sol3 surface x1 = a e^{-s}, parametrized by (x2, s) over [-1,1] x [s0, s1].
ParamSurface sol_exponential(double a, double s0 = 0.1, double s1 = 2.0);

/// The same surface in isothermal coordinates (u, v) -> (a e^{-s(v)}, u, s(v))
/// with s(v) = log(v / sqrt(1 + a^2)); v ranges over [v0, v1].
ParamSurface sol_exponential_conformal(double a, double v0, double v1);

/// Nil3 graph x3 = f(x1, x2) over [-half, half]^2 (canonical chart).
ParamSurface nil_graph(std::function<double(double, double)> f, double half = 1.0);
ParamSurface nil_horizontal_plane(double half = 1.0);
ParamSurface nil_saddle_graph(double half = 1.0);

/// Nil3 vertical plane over the line {q + u d}, parametrized by (u, x3).
ParamSurface nil_vertical_plane(Vec2 q, Vec2 d, double half = 1.0);

/// The plane x3 = 0 in isothermal polar coordinates (t, theta), radius
/// rho(t) = 4 e^t / (1 - e^{2t}) for t < 0.
ParamSurface nil_horizontal_plane_conformal(double t0, double t1);

struct NamedSurface {
  std::string name;
  SpaceId space;
  ParamSurface surface;
};

/// Every minimal surface with a closed form that the checks sample.
std::vector<NamedSurface> minimal_catalogue();

}  // namespace homegeo::surfaces
