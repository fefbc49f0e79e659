#include "homegeo/surface.hpp"

#include <cmath>

namespace homegeo {

SurfaceJet jet_at(const ParamSurface& s, double u, double v) { return jet_at(s, u, v, s.fd_step); }

SurfaceJet jet_at(const ParamSurface& s, double u, double v, double h) {
  const Vec3 c = s.eval(u, v);
  const Vec3 up = s.eval(u + h, v), um = s.eval(u - h, v);
  const Vec3 vp = s.eval(u, v + h), vm = s.eval(u, v - h);
  const Vec3 pp = s.eval(u + h, v + h), pm = s.eval(u + h, v - h);
  const Vec3 mp = s.eval(u - h, v + h), mm = s.eval(u - h, v - h);
  SurfaceJet j;
  j.x = c;
  // Fourth-order first derivatives; second derivatives stay second order.
  j.xu = (8.0 * (up - um) - (s.eval(u + 2.0 * h, v) - s.eval(u - 2.0 * h, v))) / (12.0 * h);
  j.xv = (8.0 * (vp - vm) - (s.eval(u, v + 2.0 * h) - s.eval(u, v - 2.0 * h))) / (12.0 * h);
  j.xuu = (up - 2.0 * c + um) / (h * h);
  j.xvv = (vp - 2.0 * c + vm) / (h * h);
  j.xuv = (pp - pm - mp + mm) / (4.0 * h * h);
  return j;
}

namespace {

Mat2 gram(const FrameComponents& a, const FrameComponents& b) {
  Mat2 g;
  g << a.dot(a), a.dot(b), a.dot(b), b.dot(b);
  return g;
}

void require_immersed(const Mat2& g) {
  const double det = g.determinant();
  const double scale = g.trace() * g.trace();
  if (!std::isfinite(det) || det <= 1e-14 * scale || scale == 0.0)
    throw DegenerateImmersion("first fundamental form is degenerate (det = " + std::to_string(det) + ")");
}

// Frame components of the three covariant second derivatives of the immersion.
struct CovariantSecond {
  FrameComponents a, b;  // frame components of X_u, X_v
  FrameComponents uu, uv, vv;
};

CovariantSecond covariant_second(const SpaceId& id, const SurfaceJet& j) {
  const Mat3 c = coframe(id, j.x);
  CovariantSecond d;
  d.a = c * j.xu;
  d.b = c * j.xv;
  const Mat3 dcu = coframe_derivative(id, j.x, j.xu);
  const Mat3 dcv = coframe_derivative(id, j.x, j.xv);
  d.uu = dcu * j.xu + c * j.xuu + frame_connection(id.space, d.a, d.a);
  d.uv = dcu * j.xv + c * j.xuv + frame_connection(id.space, d.a, d.b);
  d.vv = dcv * j.xv + c * j.xvv + frame_connection(id.space, d.b, d.b);
  return d;
}

}  // namespace

Mat2 induced_metric(const SpaceId& id, const Vec3& x, const Vec3& xu, const Vec3& xv) {
  const Mat3 c = coframe(id, x);
  const Mat2 g = gram(c * xu, c * xv);
  require_immersed(g);
  return g;
}

FrameComponents oriented_normal(const FrameComponents& a, const FrameComponents& b) {
  FrameComponents n = a.cross(b);
  const double len = n.norm();
  if (!(len > 0.0)) throw DegenerateImmersion("tangent vectors are parallel");
  n /= len;
  constexpr double kSignTol = 1e-9;
  double pick = n[2];
  if (std::abs(pick) <= kSignTol) pick = std::abs(n[0]) > kSignTol ? n[0] : n[1];
  if (pick < 0.0) n = -n;
  return n;
}

SurfaceGeometry surface_geometry(const SpaceId& id, const SurfaceJet& jet) {
  const CovariantSecond d = covariant_second(id, jet);
  SurfaceGeometry out;
  out.first = gram(d.a, d.b);
  require_immersed(out.first);
  out.normal = oriented_normal(d.a, d.b);
  out.second << d.uu.dot(out.normal), d.uv.dot(out.normal), d.uv.dot(out.normal), d.vv.dot(out.normal);
  out.shape = out.first.inverse() * out.second;
  out.mean_curvature = 0.5 * out.shape.trace();
  out.shape_norm = std::sqrt(std::max(0.0, (out.shape * out.shape).trace()));
  return out;
}

Mat2 induced_metric_at(const SpaceId& id, const ParamSurface& s, double u, double v) {
  const SurfaceJet j = jet_at(s, u, v);
  return induced_metric(id, j.x, j.xu, j.xv);
}

double mean_curvature_at(const SpaceId& id, const ParamSurface& s, double u, double v) {
  return surface_geometry(id, jet_at(s, u, v)).mean_curvature;
}

double second_fundamental_norm_at(const SpaceId& id, const ParamSurface& s, double u, double v) {
  return surface_geometry(id, jet_at(s, u, v)).shape_norm;
}

SurfaceScalarField SurfaceScalarField::constant(double c) {
  SurfaceScalarField f;
  f.value = [c](const Vec3&) { return c; };
  f.gradient = [](const Vec3&) { return Vec3::Zero().eval(); };
  f.hessian = [](const Vec3&) { return Mat3::Zero().eval(); };
  return f;
}

SurfaceScalarField SurfaceScalarField::inverse_coordinate(int index) {
  if (index < 0 || index > 2) throw std::out_of_range("coordinate index must be 0..2");
  SurfaceScalarField f;
  f.value = [index](const Vec3& x) { return 1.0 / x[index]; };
  f.gradient = [index](const Vec3& x) {
    Vec3 g = Vec3::Zero();
    g[index] = -1.0 / (x[index] * x[index]);
    return g;
  };
  f.hessian = [index](const Vec3& x) {
    Mat3 h = Mat3::Zero();
    h(index, index) = 2.0 / (x[index] * x[index] * x[index]);
    return h;
  };
  return f;
}

Vec3 SurfaceScalarField::grad_at(const Vec3& x) const {
  if (gradient) return gradient(x);
  constexpr double h = 1e-5;
  Vec3 g;
  for (int k = 0; k < 3; ++k) {
    const Vec3 e = h * Vec3::Unit(k);
    g[k] = (value(x + e) - value(x - e)) / (2.0 * h);
  }
  return g;
}

Mat3 SurfaceScalarField::hess_at(const Vec3& x) const {
  if (hessian) return hessian(x);
  constexpr double h = 1e-4;
  Mat3 m;
  const double f0 = value(x);
  for (int i = 0; i < 3; ++i) {
    const Vec3 ei = h * Vec3::Unit(i);
    m(i, i) = (value(x + ei) - 2.0 * f0 + value(x - ei)) / (h * h);
    for (int k = i + 1; k < 3; ++k) {
      const Vec3 ek = h * Vec3::Unit(k);
      m(i, k) = m(k, i) =
          (value(x + ei + ek) - value(x + ei - ek) - value(x - ei + ek) + value(x - ei - ek)) / (4.0 * h * h);
    }
  }
  return m;
}

namespace {

// Divergence-form Laplacian with a single step h.
double laplace_divergence(const SpaceId& id, const ParamSurface& s, const SurfaceScalarField& f, double u,
                          double v, double h) {
  const double inner = std::min(s.fd_step, 0.1 * h);
  auto field = [&](double uu, double vv) { return f.value(s.eval(uu, vv)); };
  // sqrt(g) g^-1 grad F at (uu, vv), with grad F by centred differences of step h.
  auto flux = [&](double uu, double vv) -> Vec2 {
    const SurfaceJet j = jet_at(s, uu, vv, inner);
    const Mat2 g = induced_metric(id, j.x, j.xu, j.xv);
    const Vec2 grad((field(uu + h, vv) - field(uu - h, vv)) / (2.0 * h),
                    (field(uu, vv + h) - field(uu, vv - h)) / (2.0 * h));
    return std::sqrt(g.determinant()) * (g.inverse() * grad);
  };
  const SurfaceJet j0 = jet_at(s, u, v, inner);
  const double sqrt_det = std::sqrt(induced_metric(id, j0.x, j0.xu, j0.xv).determinant());
  const double div = (flux(u + h, v)[0] - flux(u - h, v)[0]) / (2.0 * h) +
                     (flux(u, v + h)[1] - flux(u, v - h)[1]) / (2.0 * h);
  return div / sqrt_det;
}

}  // namespace

double laplace_beltrami_at(const SpaceId& id, const ParamSurface& s, const SurfaceScalarField& f, double u,
                           double v, double h) {
  const double coarse = laplace_divergence(id, s, f, u, v, h);
  const double fine = laplace_divergence(id, s, f, u, v, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

double laplace_beltrami_from_jet(const SpaceId& id, const SurfaceJet& jet, const SurfaceScalarField& f) {
  const CovariantSecond d = covariant_second(id, jet);
  const Mat2 g = gram(d.a, d.b);
  require_immersed(g);
  const Mat2 ginv = g.inverse();

  const Vec3 grad = f.grad_at(jet.x);
  const Mat3 hess = f.hess_at(jet.x);
  const Vec2 dF(grad.dot(jet.xu), grad.dot(jet.xv));
  Mat2 ddF;
  ddF(0, 0) = jet.xu.dot(hess * jet.xu) + grad.dot(jet.xuu);
  ddF(0, 1) = ddF(1, 0) = jet.xu.dot(hess * jet.xv) + grad.dot(jet.xuv);
  ddF(1, 1) = jet.xv.dot(hess * jet.xv) + grad.dot(jet.xvv);

  // Gamma^k_ij = g^kl <nabla_i X_j, X_l>; contract with dF_k directly.
  auto christoffel_term = [&](const FrameComponents& dij) {
    const Vec2 lowered(dij.dot(d.a), dij.dot(d.b));
    return (ginv * lowered).dot(dF);
  };
  Mat2 hessF;
  hessF(0, 0) = ddF(0, 0) - christoffel_term(d.uu);
  hessF(0, 1) = hessF(1, 0) = ddF(0, 1) - christoffel_term(d.uv);
  hessF(1, 1) = ddF(1, 1) - christoffel_term(d.vv);
  return (ginv.cwiseProduct(hessF)).sum();
}

ConformalQuantities conformal_quantities(const SpaceId& id, const ParamSurface& s, double u, double v) {
  const SurfaceJet j = jet_at(s, u, v);
  const Mat3 c = coframe(id, j.x);
  const FrameComponents a = c * j.xu, b = c * j.xv;
  ConformalQuantities q;
  std::complex<double> sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    q.a[k] = 0.5 * std::complex<double>(a[k], -b[k]);
    sum += q.a[k] * q.a[k];
  }
  q.defect = std::abs(sum);
  return q;
}

std::complex<double> conformal_dbar(const SpaceId& id, const ParamSurface& s, int k, double u, double v,
                                    double h) {
  if (k < 0 || k > 2) throw std::out_of_range("component index must be 0..2");
  auto comp = [&](double uu, double vv) { return conformal_quantities(id, s, uu, vv).a[k]; };
  const std::complex<double> du = (comp(u + h, v) - comp(u - h, v)) / (2.0 * h);
  const std::complex<double> dv = (comp(u, v + h) - comp(u, v - h)) / (2.0 * h);
  return 0.5 * (du + std::complex<double>(0.0, 1.0) * dv);
}

}  // namespace homegeo
