#include "homegeo/geometry.hpp"

#include <cmath>

namespace homegeo {

SpaceId::SpaceId(Space s, Chart c) : space(s), chart(c) {
  if (s == Space::Sol3 && c == Chart::NilY)
    throw std::invalid_argument("the NilY chart only exists on Nil3");
}

std::string to_string(Space s) { return s == Space::Nil3 ? "nil3" : "sol3"; }
std::string to_string(Chart c) { return c == Chart::NilY ? "nil_y" : "canonical"; }

Space parse_space(const std::string& name) {
  if (name == "nil3" || name == "Nil3" || name == "nil") return Space::Nil3;
  if (name == "sol3" || name == "Sol3" || name == "sol") return Space::Sol3;
  throw std::invalid_argument("unknown space '" + name + "'");
}

Chart parse_chart(const std::string& name) {
  if (name == "canonical") return Chart::Canonical;
  if (name == "nil_y" || name == "NilY" || name == "y") return Chart::NilY;
  throw std::invalid_argument("unknown chart '" + name + "'");
}

void require_chart(const SpaceId& id, const Point& p) {
  if (p.chart != id.chart)
    throw std::invalid_argument("point chart " + to_string(p.chart) + " does not match space chart " +
                                to_string(id.chart));
  if (!p.x.allFinite()) throw std::invalid_argument("point has non-finite coordinates");
}

// The Nil3 metric is dx1^2 + dx2^2 + theta^2 where theta is the contact form
// (1/2)(x2 dx1 - x1 dx2) + dx3, which reads dy3 - y1 dy2 in the NilY chart.
static Vec3 nil_contact_form(Chart chart, const Vec3& x) {
  if (chart == Chart::NilY) return {0.0, -x[0], 1.0};
  return {0.5 * x[1], -0.5 * x[0], 1.0};
}

static Vec3 nil_contact_form_derivative(Chart chart, const Vec3& v) {
  if (chart == Chart::NilY) return {0.0, -v[0], 0.0};
  return {0.5 * v[1], -0.5 * v[0], 0.0};
}

Mat3 coframe(const SpaceId& id, const Vec3& x) {
  Mat3 c = Mat3::Zero();
  if (id.space == Space::Sol3) {
    const double es = std::exp(x[2]);
    c(0, 0) = es;
    c(1, 1) = 1.0 / es;
    c(2, 2) = 1.0;
  } else {
    c(0, 0) = 1.0;
    c(1, 1) = 1.0;
    c.row(2) = nil_contact_form(id.chart, x).transpose();
  }
  return c;
}

Mat3 coframe_derivative(const SpaceId& id, const Vec3& x, const Vec3& v) {
  Mat3 d = Mat3::Zero();
  if (id.space == Space::Sol3) {
    const double es = std::exp(x[2]);
    d(0, 0) = es * v[2];
    d(1, 1) = -v[2] / es;
  } else {
    d.row(2) = nil_contact_form_derivative(id.chart, v).transpose();
  }
  return d;
}

FrameMatrix frame(const SpaceId& id, const Vec3& x) {
  FrameMatrix f = Mat3::Zero();
  if (id.space == Space::Sol3) {
    const double es = std::exp(x[2]);
    f(0, 0) = 1.0 / es;
    f(1, 1) = es;
    f(2, 2) = 1.0;
  } else if (id.chart == Chart::NilY) {
    f(0, 0) = 1.0;
    f(1, 1) = 1.0;
    f(2, 1) = x[0];
    f(2, 2) = 1.0;
  } else {
    f(0, 0) = 1.0;
    f(2, 0) = -0.5 * x[1];
    f(1, 1) = 1.0;
    f(2, 1) = 0.5 * x[0];
    f(2, 2) = 1.0;
  }
  return f;
}

Mat3 metric(const SpaceId& id, const Vec3& x) {
  if (id.space == Space::Sol3) {
    const double e2s = std::exp(2.0 * x[2]);
    return Vec3(e2s, 1.0 / e2s, 1.0).asDiagonal();
  }
  const Vec3 theta = nil_contact_form(id.chart, x);
  Mat3 g = theta * theta.transpose();
  g(0, 0) += 1.0;
  g(1, 1) += 1.0;
  return g;
}

std::array<Mat3, 3> metric_partials(const SpaceId& id, const Vec3& x) {
  std::array<Mat3, 3> d{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  if (id.space == Space::Sol3) {
    const double e2s = std::exp(2.0 * x[2]);
    d[2](0, 0) = 2.0 * e2s;
    d[2](1, 1) = -2.0 / e2s;
    return d;
  }
  const Vec3 theta = nil_contact_form(id.chart, x);
  for (int k = 0; k < 3; ++k) {
    const Vec3 dtheta = nil_contact_form_derivative(id.chart, Vec3::Unit(k));
    d[k] = dtheta * theta.transpose() + theta * dtheta.transpose();
  }
  return d;
}

Mat3 metric_at(const SpaceId& id, const Point& p) {
  require_chart(id, p);
  return metric(id, p.x);
}

std::array<CoordVector, 3> frame_in_chart(const SpaceId& id, const Point& p) {
  require_chart(id, p);
  const FrameMatrix f = frame(id, p.x);
  return {f.col(0), f.col(1), f.col(2)};
}

std::array<CoordVector, 3> canonical_frame_at(const SpaceId& id, const Point& p) {
  if (id.chart != Chart::Canonical)
    throw std::invalid_argument("canonical_frame_at expects the canonical chart; use frame_in_chart for NilY");
  return frame_in_chart(id, p);
}

static ConnectionTable make_sol_table() {
  const Vec3 z = Vec3::Zero();
  const Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY(), e3 = Vec3::UnitZ();
  ConnectionTable t;
  t[0] = {-e3, z, e1};
  t[1] = {z, e3, -e2};
  t[2] = {z, z, z};
  return t;
}

static ConnectionTable make_nil_table() {
  const Vec3 z = Vec3::Zero();
  const Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY(), e3 = Vec3::UnitZ();
  ConnectionTable t;
  t[0] = {z, 0.5 * e3, -0.5 * e2};
  t[1] = {-0.5 * e3, z, 0.5 * e1};
  t[2] = {-0.5 * e2, 0.5 * e1, z};
  return t;
}

const ConnectionTable& connection_table(Space s) {
  static const ConnectionTable sol = make_sol_table();
  static const ConnectionTable nil = make_nil_table();
  return s == Space::Sol3 ? sol : nil;
}

FrameComponents frame_connection(Space s, const FrameComponents& w, const FrameComponents& v) {
  const ConnectionTable& t = connection_table(s);
  FrameComponents out = FrameComponents::Zero();
  for (int i = 0; i < 3; ++i) {
    if (w[i] == 0.0) continue;
    for (int j = 0; j < 3; ++j) out += (w[i] * v[j]) * t[i][j];
  }
  return out;
}

Mat3 nil_y_jacobian(const Vec3& x) {
  Mat3 j = Mat3::Identity();
  j(2, 0) = 0.5 * x[1];
  j(2, 1) = 0.5 * x[0];
  return j;
}

CoordVector killing_field_at(const SpaceId& id, int k, const Point& p) {
  require_chart(id, p);
  if (id.space == Space::Sol3) {
    const Vec3& x = p.x;
    switch (k) {
      case 1: return {1.0, 0.0, 0.0};
      case 2: return {0.0, 1.0, 0.0};
      case 3: return {-x[0], x[1], 1.0};
      default: throw std::out_of_range("Sol3 Killing field index must be 1..3");
    }
  }
  if (k < 1 || k > 4) throw std::out_of_range("Nil3 Killing field index must be 1..4");
  const Vec3 x = id.chart == Chart::NilY ? nil_chart_convert(p, Chart::Canonical).x : p.x;
  Vec3 f;
  switch (k) {
    case 1: f = {1.0, 0.0, 0.5 * x[1]}; break;
    case 2: f = {0.0, 1.0, -0.5 * x[0]}; break;
    case 3: f = {0.0, 0.0, 1.0}; break;
    default: f = {-x[1], x[0], 0.0}; break;
  }
  if (id.chart == Chart::NilY) return nil_y_jacobian(x) * f;
  return f;
}

Point nil_chart_convert(const Point& p, Chart target) {
  if (!p.x.allFinite()) throw std::invalid_argument("point has non-finite coordinates");
  if (p.chart == target) return p;
  const Vec3& x = p.x;
  const double half_product = 0.5 * x[0] * x[1];
  if (target == Chart::NilY) return Point(x[0], x[1], x[2] + half_product, Chart::NilY);
  return Point(x[0], x[1], x[2] - half_product, Chart::Canonical);
}

Point nil_chart_convert(const SpaceId& id, const Point& p, Chart target) {
  if (id.space != Space::Nil3) throw std::invalid_argument("chart conversion is only defined on Nil3");
  return nil_chart_convert(p, target);
}

}  // namespace homegeo
