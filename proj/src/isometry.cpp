#include "homegeo/isometry.hpp"

#include <cmath>
#include <stdexcept>

namespace homegeo {

namespace {

bool is_sol_kind(Isometry::Kind k) {
  using K = Isometry::Kind;
  return k == K::SolTranslateX1 || k == K::SolTranslateX2 || k == K::SolTc || k == K::SolSigma ||
         k == K::SolTau;
}

Vec3 apply_canonical(Space space, const Isometry& g, const Vec3& x) {
  using K = Isometry::Kind;
  const double c = g.param;
  switch (g.kind) {
    case K::SolTranslateX1: return {x[0] + c, x[1], x[2]};
    case K::SolTranslateX2: return {x[0], x[1] + c, x[2]};
    case K::SolTc: return {std::exp(-c) * x[0], std::exp(c) * x[1], x[2] + c};
    case K::SolSigma: return {x[1], -x[0], -x[2]};
    case K::SolTau: return {-x[0], x[1], x[2]};
    case K::NilTranslate1: return {x[0] + c, x[1], x[2] + 0.5 * c * x[1]};
    case K::NilTranslate2: return {x[0], x[1] + c, x[2] - 0.5 * c * x[0]};
    case K::NilVertical: return {x[0], x[1], x[2] + c};
    case K::NilRotate: {
      const double cs = std::cos(c), sn = std::sin(c);
      return {cs * x[0] - sn * x[1], sn * x[0] + cs * x[1], x[2]};
    }
    case K::NilReflect: return {-x[0], x[1], -x[2]};
    case K::Composite: {
      Vec3 y = x;
      for (const Isometry& part : g.parts) y = apply_canonical(space, part, y);
      return y;
    }
  }
  return x;
}

}  // namespace

bool Isometry::valid_for(Space s) const {
  if (kind == Kind::Composite) {
    for (const Isometry& p : parts)
      if (!p.valid_for(s)) return false;
    return true;
  }
  return is_sol_kind(kind) == (s == Space::Sol3);
}

Isometry Isometry::inverse() const {
  switch (kind) {
    case Kind::SolSigma:
      // sigma^-1 = sigma^3
      return compose({sol_sigma(), sol_sigma(), sol_sigma()});
    case Kind::SolTau:
    case Kind::NilReflect: return *this;
    case Kind::Composite: {
      std::vector<Isometry> inv;
      inv.reserve(parts.size());
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) inv.push_back(it->inverse());
      return compose(std::move(inv));
    }
    default: return {kind, -param, {}};
  }
}

std::string to_string(Isometry::Kind k) {
  using K = Isometry::Kind;
  switch (k) {
    case K::SolTranslateX1: return "SolTranslateX1";
    case K::SolTranslateX2: return "SolTranslateX2";
    case K::SolTc: return "SolTc";
    case K::SolSigma: return "SolSigma";
    case K::SolTau: return "SolTau";
    case K::NilTranslate1: return "NilTranslate1";
    case K::NilTranslate2: return "NilTranslate2";
    case K::NilVertical: return "NilVertical";
    case K::NilRotate: return "NilRotate";
    case K::NilReflect: return "NilReflect";
    case K::Composite: return "Composite";
  }
  return "Composite";
}

Isometry::Kind parse_isometry_kind(const std::string& name) {
  using K = Isometry::Kind;
  for (K k : {K::SolTranslateX1, K::SolTranslateX2, K::SolTc, K::SolSigma, K::SolTau, K::NilTranslate1,
              K::NilTranslate2, K::NilVertical, K::NilRotate, K::NilReflect, K::Composite})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown isometry kind '" + name + "'");
}

Vec3 apply_isometry_raw(const SpaceId& id, const Isometry& g, const Vec3& x) {
  if (id.chart == Chart::NilY) {
    const Vec3 xc = nil_chart_convert(Point(x, Chart::NilY), Chart::Canonical).x;
    return nil_chart_convert(Point(apply_canonical(id.space, g, xc)), Chart::NilY).x;
  }
  return apply_canonical(id.space, g, x);
}

Point apply_isometry(const SpaceId& id, const Isometry& g, const Point& p) {
  require_chart(id, p);
  if (!g.valid_for(id.space))
    throw std::invalid_argument("isometry " + to_string(g.kind) + " does not act on " + to_string(id.space));
  return Point(apply_isometry_raw(id, g, p.x), p.chart);
}

std::vector<Isometry> sol_isotropy_group() {
  std::vector<Isometry> group;
  std::vector<Isometry> sigma_power;
  for (int k = 0; k < 4; ++k) {
    group.push_back(Isometry::compose(sigma_power));
    sigma_power.push_back(Isometry::sol_sigma());
  }
  for (int k = 0; k < 4; ++k) {
    std::vector<Isometry> parts(static_cast<std::size_t>(k), Isometry::sol_sigma());
    // sigma^k tau: tau acts first, then sigma^k.
    parts.insert(parts.begin(), Isometry::sol_tau());
    group.push_back(Isometry::compose(std::move(parts)));
  }
  return group;
}

}  // namespace homegeo
