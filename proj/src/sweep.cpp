#include "homegeo/plateau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace homegeo {

std::string to_string(SweepResult::Kind k) {
  switch (k) {
    case SweepResult::Kind::Interior:
      return "interior";
    case SweepResult::Kind::Boundary:
      return "boundary";
    case SweepResult::Kind::None:
      break;
  }
  return "none";
}

Isometry SweepFamily::at(double c) const {
  switch (generator) {
    case Generator::SolTMinus:
      return Isometry::sol_tc(-c);
    case Generator::NilVerticalDown:
      return Isometry::nil_vertical(-c);
    case Generator::NilPhiMinus:
      break;
  }
  return Isometry::nil_translate1(-c);
}

SweepFamily SweepFamily::for_spec(const RegionSpec& spec, double c_max) {
  SweepFamily f;
  f.c_max = c_max;
  switch (spec.reference) {
    case RegionSpec::Reference::SolSpecialPlane:
      f.generator = Generator::SolTMinus;
      break;
    case RegionSpec::Reference::NilEntireGraph:
      f.generator = Generator::NilVerticalDown;
      break;
    case RegionSpec::Reference::NilVerticalPlane:
      f.generator = Generator::NilPhiMinus;
      break;
  }
  return f;
}

namespace {

using Tri = std::array<Vec3, 3>;

// Closest point on triangle abc to p (Voronoi region walk).
Vec3 closest_on_triangle(const Vec3& p, const Tri& t) {
  const Vec3 &a = t[0], &b = t[1], &c = t[2];
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

// Closest points between segments p1q1 and p2q2.
std::pair<Vec3, Vec3> closest_segments(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
  const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  constexpr double tiny = 1e-300;
  double s = 0, t = 0;
  if (a <= tiny && e <= tiny) return {p1, p2};
  if (a <= tiny) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= tiny) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2), denom = a * e - b * b;
      s = denom > 0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0) {
        t = 0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1) {
        t = 1;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return {p1 + d1 * s, p2 + d2 * t};
}

// Crossing point of segment pq with triangle t, if any.
std::optional<Vec3> segment_hits_triangle(const Vec3& p, const Vec3& q, const Tri& t) {
  const Vec3 d = q - p, e1 = t[1] - t[0], e2 = t[2] - t[0];
  const Vec3 h = d.cross(e2);
  const double det = e1.dot(h);
  if (std::abs(det) < 1e-300) return std::nullopt;
  const Vec3 s = p - t[0];
  const double u = s.dot(h) / det;
  if (u < 0 || u > 1) return std::nullopt;
  const Vec3 qq = s.cross(e1);
  const double v = d.dot(qq) / det;
  if (v < 0 || u + v > 1) return std::nullopt;
  const double w = e2.dot(qq) / det;
  if (w < 0 || w > 1) return std::nullopt;
  return p + w * d;
}

MeshDistance triangle_distance(const Tri& A, const Tri& B) {
  MeshDistance best;
  best.distance = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec3& pa, const Vec3& pb) {
    const double d = (pa - pb).norm();
    if (d < best.distance) {
      best.distance = d;
      best.on_first = pa;
      best.on_second = pb;
    }
  };
  for (int k = 0; k < 3; ++k) {
    if (auto x = segment_hits_triangle(A[k], A[(k + 1) % 3], B)) {
      consider(*x, *x);
      return best;
    }
    if (auto x = segment_hits_triangle(B[k], B[(k + 1) % 3], A)) {
      consider(*x, *x);
      return best;
    }
  }
  for (int k = 0; k < 3; ++k) {
    consider(A[k], closest_on_triangle(A[k], B));
    consider(closest_on_triangle(B[k], A), B[k]);
    for (int l = 0; l < 3; ++l) {
      const auto [pa, pb] = closest_segments(A[k], A[(k + 1) % 3], B[l], B[(l + 1) % 3]);
      consider(pa, pb);
    }
  }
  return best;
}

Tri triangle_of(const TriMesh& m, int t) {
  const auto& f = m.triangles[t];
  return {m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]};
}

// All triangle pairs of a and b closer than cutoff, via a uniform hash grid on b.
std::vector<MeshDistance> close_pairs(const TriMesh& a, const TriMesh& b, double cutoff) {
  std::vector<MeshDistance> out;
  if (a.triangles.empty() || b.triangles.empty()) return out;
  double extent = 0.0;
  for (int t = 0; t < static_cast<int>(b.triangles.size()); ++t) {
    const Tri T = triangle_of(b, t);
    extent += (T[0].cwiseMax(T[1]).cwiseMax(T[2]) - T[0].cwiseMin(T[1]).cwiseMin(T[2])).maxCoeff();
  }
  const double cell = std::max(cutoff, extent / b.triangles.size());
  auto key = [](long i, long j, long k) { return (i * 73856093L) ^ (j * 19349663L) ^ (k * 83492791L); };
  auto index = [&](double x) { return static_cast<long>(std::floor(x / cell)); };
  std::unordered_map<long, std::vector<int>> grid;
  for (int t = 0; t < static_cast<int>(b.triangles.size()); ++t) {
    const Tri T = triangle_of(b, t);
    const Vec3 lo = T[0].cwiseMin(T[1]).cwiseMin(T[2]), hi = T[0].cwiseMax(T[1]).cwiseMax(T[2]);
    for (long i = index(lo[0]); i <= index(hi[0]); ++i)
      for (long j = index(lo[1]); j <= index(hi[1]); ++j)
        for (long k = index(lo[2]); k <= index(hi[2]); ++k) grid[key(i, j, k)].push_back(t);
  }
  std::vector<int> stamp(b.triangles.size(), -1);
  for (int s = 0; s < static_cast<int>(a.triangles.size()); ++s) {
    const Tri A = triangle_of(a, s);
    const Vec3 lo = A[0].cwiseMin(A[1]).cwiseMin(A[2]).array() - cutoff;
    const Vec3 hi = A[0].cwiseMax(A[1]).cwiseMax(A[2]).array() + cutoff;
    for (long i = index(lo[0]); i <= index(hi[0]); ++i)
      for (long j = index(lo[1]); j <= index(hi[1]); ++j)
        for (long k = index(lo[2]); k <= index(hi[2]); ++k) {
          const auto it = grid.find(key(i, j, k));
          if (it == grid.end()) continue;
          for (int t : it->second) {
            if (stamp[t] == s) continue;
            stamp[t] = s;
            const Tri B = triangle_of(b, t);
            const Vec3 blo = B[0].cwiseMin(B[1]).cwiseMin(B[2]), bhi = B[0].cwiseMax(B[1]).cwiseMax(B[2]);
            if ((blo.array() > hi.array()).any() || (bhi.array() < lo.array()).any()) continue;
            MeshDistance d = triangle_distance(A, B);
            if (d.distance <= cutoff) {
              d.first_triangle = s;
              out.push_back(d);
            }
          }
        }
  }
  return out;
}

double distance_to_boundary(const TriMesh& m, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& loop : m.boundary_loops)
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = m.vertices[loop[i]];
      const Vec3& b = m.vertices[loop[(i + 1) % loop.size()]];
      best = std::min(best, (closest_segments(p, p, a, b).second - p).norm());
    }
  return best;
}

}  // namespace

MeshDistance mesh_distance(const TriMesh& a, const TriMesh& b, double cutoff) {
  if (a.chart != b.chart) throw std::invalid_argument("meshes use different charts");
  MeshDistance best;
  best.distance = std::numeric_limits<double>::infinity();
  for (const auto& d : close_pairs(a, b, cutoff))
    if (d.distance < best.distance) best = d;
  return best;
}

SweepResult sweep_contact(const SpaceId& id, const TriMesh& M, const TriMesh& test, const SweepFamily& family,
                          const SweepOptions& opts) {
  if (!(opts.c_step > 0.0 && opts.refine_tol > 0.0 && opts.contact_threshold > 0.0 && family.c_max >= 0.0))
    throw std::invalid_argument("bad sweep options");
  if (M.chart != id.chart || test.chart != id.chart) throw std::invalid_argument("mesh chart does not match space");
  auto moved = [&](double c) { return transform_mesh(id, family.at(c), M); };
  auto touches = [&](double c) {
    return mesh_distance(moved(c), test, opts.contact_threshold).distance <= opts.contact_threshold;
  };

  SweepResult res;
  res.disjoint_beyond_range = !touches(family.c_max + opts.c_step);
  double hi = -1.0, lo = -1.0;  // no contact at hi, contact at lo
  if (touches(family.c_max)) {
    res.saturated = true;
    lo = hi = family.c_max;
  } else {
    const int steps = static_cast<int>(std::ceil(family.c_max / opts.c_step));
    for (int k = 1; k <= steps; ++k) {
      const double c = std::max(0.0, family.c_max - k * opts.c_step);
      if (touches(c)) {
        lo = c;
        hi = std::min(family.c_max, c + opts.c_step);
        break;
      }
    }
  }
  if (lo < 0.0) {
    res.contact_kind = SweepResult::Kind::None;
    return res;
  }
  while (hi - lo > opts.refine_tol) {
    const double mid = 0.5 * (lo + hi);
    (touches(mid) ? lo : hi) = mid;
  }
  res.c_star = lo;

  const TriMesh Mc = moved(lo);
  const auto pairs = close_pairs(Mc, test, opts.contact_threshold);
  const auto nearest = std::min_element(pairs.begin(), pairs.end(),
                                        [](const auto& a, const auto& b) { return a.distance < b.distance; });
  res.contact_point = nearest->on_first;
  res.boundary_distance = distance_to_boundary(Mc, res.contact_point);
  const bool on_boundary = res.boundary_distance <= opts.refine_tol;
  res.contact_kind = on_boundary ? SweepResult::Kind::Boundary : SweepResult::Kind::Interior;
  for (const auto& p : pairs) {
    if (p.distance > nearest->distance + opts.refine_tol) continue;
    if ((distance_to_boundary(Mc, p.on_first) <= opts.refine_tol) != on_boundary)
      throw SweepAmbiguous("nearest contacts lie both on the boundary and in the interior");
  }
  return res;
}

}  // namespace homegeo
