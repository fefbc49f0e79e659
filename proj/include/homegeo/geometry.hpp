#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace homegeo {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

enum class Space { Nil3, Sol3 };

// NilY is the (y1,y2,y3) chart of Nil3 with y3 = x3 + x1*x2/2.
enum class Chart { Canonical, NilY };

struct SpaceId {
  Space space = Space::Sol3;
  Chart chart = Chart::Canonical;

  constexpr SpaceId() = default;
  SpaceId(Space s, Chart c = Chart::Canonical);

  bool operator==(const SpaceId&) const = default;

  static SpaceId sol3() { return {Space::Sol3}; }
  static SpaceId nil3() { return {Space::Nil3}; }
  static SpaceId nil3_y() { return {Space::Nil3, Chart::NilY}; }
};

std::string to_string(Space s);
std::string to_string(Chart c);
Space parse_space(const std::string& name);
Chart parse_chart(const std::string& name);

/// A point of the model space R^3, with coordinates in the named chart.
/// Sol3: (x1, x2, s). Nil3 canonical: (x1, x2, x3). Nil3 NilY: (y1, y2, y3).
struct Point {
  Vec3 x = Vec3::Zero();
  Chart chart = Chart::Canonical;

  Point() = default;
  Point(double c1, double c2, double c3, Chart ch = Chart::Canonical) : x(c1, c2, c3), chart(ch) {}
  Point(const Vec3& v, Chart ch = Chart::Canonical) : x(v), chart(ch) {}

  double operator[](int i) const { return x[i]; }
};

/// Tangent vector in the coordinate basis of the chart it is attached to.
using CoordVector = Vec3;

/// Tangent vector in the canonical orthonormal frame (E1, E2, E3).
using FrameComponents = Vec3;

/// Frame vectors as columns (in coordinates), one column per E_i.
using FrameMatrix = Mat3;

// ---------------------------------------------------------------------------
// Chart-level kernels on raw coordinates. These skip the Point chart check and
// are what the mesh and grid kernels call in their inner loops.

/// Rows are the dual coframe (omega_1, omega_2, omega_3) in coordinates.
/// The metric is C^T C, so frame components of a vector v are C v.
Mat3 coframe(const SpaceId& id, const Vec3& x);

/// Directional derivative of the coframe matrix along v.
Mat3 coframe_derivative(const SpaceId& id, const Vec3& x, const Vec3& v);

/// Columns are E1, E2, E3 in coordinates; inverse of coframe().
FrameMatrix frame(const SpaceId& id, const Vec3& x);

Mat3 metric(const SpaceId& id, const Vec3& x);

/// d(metric)/dx_k for k = 0, 1, 2.
std::array<Mat3, 3> metric_partials(const SpaceId& id, const Vec3& x);

// ---------------------------------------------------------------------------
// Checked operations on Points.

/// Coordinate-basis Gram matrix at p. Throws std::invalid_argument when the
/// chart of p does not belong to the space.
Mat3 metric_at(const SpaceId& id, const Point& p);

/// E1, E2, E3 at p in the canonical chart. The NilY variant of the frame is
/// available through frame_in_chart().
std::array<CoordVector, 3> canonical_frame_at(const SpaceId& id, const Point& p);
std::array<CoordVector, 3> frame_in_chart(const SpaceId& id, const Point& p);

/// table[i][j] holds the frame components of nabla_{E_i} E_j.
using ConnectionTable = std::array<std::array<FrameComponents, 3>, 3>;
const ConnectionTable& connection_table(Space s);

/// sum_ij w_i v_j nabla_{E_i} E_j.
FrameComponents frame_connection(Space s, const FrameComponents& w, const FrameComponents& v);

/// Killing fields F_1..F_3 (Sol3) and F_1..F_4 (Nil3, F_4 at theta = 0).
CoordVector killing_field_at(const SpaceId& id, int k, const Point& p);

/// Converts a Nil3 point between the canonical and NilY charts.
Point nil_chart_convert(const Point& p, Chart target);

/// Same, but rejects points of Sol3 with std::invalid_argument.
Point nil_chart_convert(const SpaceId& id, const Point& p, Chart target);

/// Jacobian d(y)/d(x) of the canonical -> NilY chart map at canonical x.
Mat3 nil_y_jacobian(const Vec3& x);

void require_chart(const SpaceId& id, const Point& p);

}  // namespace homegeo
