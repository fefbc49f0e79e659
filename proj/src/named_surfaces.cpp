#include "homegeo/named_surfaces.hpp"

#include <cmath>

namespace homegeo::surfaces {

namespace {

ParamSurface square(std::function<Vec3(double, double)> eval, double half, Chart chart = Chart::Canonical) {
  ParamSurface s;
  s.eval = std::move(eval);
  s.chart = chart;
  s.u0 = s.v0 = -half;
  s.u1 = s.v1 = half;
  return s;
}

}  // namespace

ParamSurface sol_special_plane(double t, double half) {
  return square([t](double u, double v) { return Vec3(u, v, t); }, half);
}

ParamSurface sol_coordinate_plane(int j, double t, double half) {
  if (j == 1) return square([t](double u, double v) { return Vec3(t, u, v); }, half);
  return square([t](double u, double v) { return Vec3(u, t, v); }, half);
}

ParamSurface sol_exponential(double a, double s0, double s1) {
  ParamSurface s;
  s.eval = [a](double u, double v) { return Vec3(a * std::exp(-v), u, v); };
  s.u0 = -1.0;
  s.u1 = 1.0;
  s.v0 = s0;
  s.v1 = s1;
  return s;
}

ParamSurface sol_exponential_conformal(double a, double v0, double v1) {
  const double scale = std::sqrt(1.0 + a * a);
  ParamSurface s;
  s.eval = [a, scale](double u, double v) {
    const double sv = std::log(v / scale);
    return Vec3(a * std::exp(-sv), u, sv);
  };
  s.u0 = -1.0;
  s.u1 = 1.0;
  s.v0 = v0;
  s.v1 = v1;
  return s;
}

ParamSurface nil_graph(std::function<double(double, double)> f, double half) {
  return square([f = std::move(f)](double u, double v) { return Vec3(u, v, f(u, v)); }, half);
}

ParamSurface nil_horizontal_plane(double half) {
  return nil_graph([](double, double) { return 0.0; }, half);
}

ParamSurface nil_saddle_graph(double half) {
  return nil_graph([](double x1, double x2) { return 0.5 * x1 * x2; }, half);
}

ParamSurface nil_vertical_plane(Vec2 q, Vec2 d, double half) {
  d.normalize();
  return square([q, d](double u, double v) { return Vec3(q[0] + u * d[0], q[1] + u * d[1], v); }, half);
}

ParamSurface nil_horizontal_plane_conformal(double t0, double t1) {
  ParamSurface s;
  s.eval = [](double t, double theta) {
    const double q = std::exp(t);
    const double rho = 4.0 * q / (1.0 - q * q);
    return Vec3(rho * std::cos(theta), rho * std::sin(theta), 0.0);
  };
  s.u0 = t0;
  s.u1 = t1;
  s.v0 = 0.0;
  s.v1 = 2.0 * M_PI;
  return s;
}

std::vector<NamedSurface> minimal_catalogue() {
  std::vector<NamedSurface> out;
  for (double t : {0.0, 1.0, 2.0})
    out.push_back({"sol3 special plane s=" + std::to_string(static_cast<int>(t)), SpaceId::sol3(),
                   sol_special_plane(t)});
  for (double a : {0.5, 1.0, 2.0})
    out.push_back({"sol3 x1=a*exp(-s), a=" + std::to_string(a), SpaceId::sol3(), sol_exponential(a)});
  out.push_back({"nil3 graph x3=0", SpaceId::nil3(), nil_horizontal_plane()});
  out.push_back({"nil3 graph x3=x1*x2/2", SpaceId::nil3(), nil_saddle_graph()});
  out.push_back({"nil3 vertical plane over x2=0", SpaceId::nil3(), nil_vertical_plane({0, 0}, {1, 0})});
  out.push_back({"nil3 vertical plane over x1+x2=1", SpaceId::nil3(), nil_vertical_plane({1, 0}, {-1, 1})});
  return out;
}

}  // namespace homegeo::surfaces
