#pragma once

// Independent finite-difference oracles used by the unit and acceptance
// suites. Nothing here calls the connection tables or the surface kernels.

#include "homegeo/geometry.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace homegeo::oracle {

inline constexpr double kStep = 1e-5;

/// Gamma[k](i, j) = Christoffel symbol Gamma^k_ij from centred differences
/// of the metric.
inline std::array<Mat3, 3> christoffel_fd(const SpaceId& id, const Vec3& x, double h = kStep) {
  std::array<Mat3, 3> dg;
  for (int l = 0; l < 3; ++l) {
    const Vec3 e = h * Vec3::Unit(l);
    dg[l] = (metric(id, x + e) - metric(id, x - e)) / (2.0 * h);
  }
  const Mat3 ginv = metric(id, x).inverse();
  std::array<Mat3, 3> gamma;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k](i, j) = 0.5 * s;
      }
  return gamma;
}

/// nabla_{E_i} E_j in frame components, computed from finite-difference
/// Christoffel symbols and the frame field's coordinate derivatives.
inline Vec3 frame_connection_fd(const SpaceId& id, const Vec3& x, int i, int j, double h = kStep) {
  const Mat3 f = frame(id, x);
  const Vec3 ei = f.col(i), ej = f.col(j);
  const Vec3 dej = (frame(id, x + h * ei).col(j) - frame(id, x - h * ei).col(j)) / (2.0 * h);
  const auto gamma = christoffel_fd(id, x, h);
  Vec3 v = dej;
  for (int k = 0; k < 3; ++k) v[k] += ei.dot(gamma[k] * ej);
  const Mat3 g = metric(id, x);
  return {v.dot(g * f.col(0)), v.dot(g * f.col(1)), v.dot(g * f.col(2))};
}

/// Lie derivative of the metric along a vector field.
inline Mat3 lie_derivative_fd(const SpaceId& id, const std::function<Vec3(const Vec3&)>& field, const Vec3& x,
                              double h = kStep) {
  std::array<Mat3, 3> dg;
  Mat3 dfield;  // dfield(k, i) = d F^k / d x_i
  for (int l = 0; l < 3; ++l) {
    const Vec3 e = h * Vec3::Unit(l);
    dg[l] = (metric(id, x + e) - metric(id, x - e)) / (2.0 * h);
    dfield.col(l) = (field(x + e) - field(x - e)) / (2.0 * h);
  }
  const Mat3 g = metric(id, x);
  const Vec3 f = field(x);
  Mat3 out = g * dfield + dfield.transpose() * g;
  for (int k = 0; k < 3; ++k) out += f[k] * dg[k];
  return out;
}

inline Mat3 jacobian_fd(const std::function<Vec3(const Vec3&)>& map, const Vec3& x, double h = kStep) {
  Mat3 j;
  for (int l = 0; l < 3; ++l) {
    const Vec3 e = h * Vec3::Unit(l);
    j.col(l) = (map(x + e) - map(x - e)) / (2.0 * h);
  }
  return j;
}

inline Vec3 random_point(std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  return {d(rng), d(rng), d(rng)};
}

/// Adaptive Simpson quadrature on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 40) {
  auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson(lo, mid, flo, flm, fmid);
        const double right = simpson(mid, hi, fmid, frm, fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
          return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, 0.5 * eps, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, 0.5 * eps, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

}  // namespace homegeo::oracle
