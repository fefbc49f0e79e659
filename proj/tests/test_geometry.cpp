#include "doctest.h"
#include "homegeo/geometry.hpp"
#include "homegeo/isometry.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace homegeo;

namespace {

const SpaceId kSol = SpaceId::sol3();
const SpaceId kNil = SpaceId::nil3();
const SpaceId kNilY = SpaceId::nil3_y();

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("SpaceId rejects the NilY chart on Sol3") {
  CHECK_THROWS_AS(SpaceId(Space::Sol3, Chart::NilY), std::invalid_argument);
  CHECK_NOTHROW(SpaceId(Space::Nil3, Chart::NilY));
}

TEST_CASE("metric_at examples") {
  CHECK(max_abs(metric_at(kSol, Point(0, 0, 0)) - Mat3::Identity()) == 0.0);

  const Mat3 g = metric_at(kSol, Point(0, 0, 1));
  CHECK(g(0, 0) == doctest::Approx(7.389056).epsilon(1e-7));
  CHECK(g(1, 1) == doctest::Approx(0.135335).epsilon(1e-6));
  CHECK(g(2, 2) == 1.0);
  CHECK(max_abs(g - Mat3(g.diagonal().asDiagonal())) == 0.0);

  Mat3 expected;
  expected << 1, 0, 0, 0, 2, -1, 0, -1, 1;
  CHECK(max_abs(metric_at(kNil, Point(2, 0, 0)) - expected) < 1e-15);

  CHECK_THROWS_AS(metric_at(kNil, Point(0, 0, 0, Chart::NilY)), std::invalid_argument);
  CHECK_THROWS_AS(metric_at(kNilY, Point(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("canonical frame examples") {
  const double s = 0.7;
  const auto sol = canonical_frame_at(kSol, Point(0.3, -1.0, s));
  CHECK((sol[0] - Vec3(std::exp(-s), 0, 0)).norm() < 1e-15);
  CHECK((sol[1] - Vec3(0, std::exp(s), 0)).norm() < 1e-15);
  CHECK((sol[2] - Vec3(0, 0, 1)).norm() == 0.0);

  const auto nil = canonical_frame_at(kNil, Point(1.5, -2.0, 0.4));
  CHECK((nil[0] - Vec3(1, 0, 1.0)).norm() < 1e-15);
  CHECK((nil[1] - Vec3(0, 1, 0.75)).norm() < 1e-15);
  CHECK((nil[2] - Vec3(0, 0, 1)).norm() == 0.0);

  CHECK_THROWS_AS(canonical_frame_at(kNilY, Point(0, 0, 0, Chart::NilY)), std::invalid_argument);
  const auto ny = frame_in_chart(kNilY, Point(2, 0, 0, Chart::NilY));
  CHECK((ny[1] - Vec3(0, 1, 2)).norm() == 0.0);
}

TEST_CASE("frames are orthonormal at random points") {
  std::mt19937_64 rng(42);
  for (const SpaceId& id : {kSol, kNil, kNilY}) {
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const Vec3 x = oracle::random_point(rng);
      const Mat3 f = frame(id, x);
      worst = std::max(worst, max_abs(f.transpose() * metric(id, x) * f - Mat3::Identity()));
      worst = std::max(worst, max_abs(coframe(id, x) * f - Mat3::Identity()));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("frame_connection table entries") {
  CHECK((frame_connection(Space::Sol3, Vec3::UnitX(), Vec3::UnitX()) - Vec3(0, 0, -1)).norm() == 0.0);
  CHECK((frame_connection(Space::Nil3, Vec3::UnitX(), Vec3::UnitY()) - Vec3(0, 0, 0.5)).norm() == 0.0);
  for (int j = 0; j < 3; ++j)
    CHECK(frame_connection(Space::Sol3, Vec3::UnitZ(), Vec3::Unit(j)).norm() == 0.0);
}

TEST_CASE("frame_connection is bilinear") {
  std::mt19937_64 rng(7);
  for (Space s : {Space::Sol3, Space::Nil3}) {
    const Vec3 w1 = oracle::random_point(rng), w2 = oracle::random_point(rng), v = oracle::random_point(rng);
    const Vec3 lhs = frame_connection(s, 2.0 * w1 - 3.0 * w2, v);
    const Vec3 rhs = 2.0 * frame_connection(s, w1, v) - 3.0 * frame_connection(s, w2, v);
    CHECK((lhs - rhs).norm() < 1e-13);
  }
}

TEST_CASE("connection tables are metric compatible") {
  // <nabla_k E_i, E_j> + <E_i, nabla_k E_j> = 0 on all 27 entries, exactly.
  for (Space s : {Space::Sol3, Space::Nil3}) {
    const auto& t = connection_table(s);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(t[k][i][j] + t[k][j][i] == 0.0);
  }
}

TEST_CASE("connection tables match finite-difference Christoffel symbols") {
  std::mt19937_64 rng(11);
  for (const SpaceId& id : {kSol, kNil, kNilY}) {
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
      const Vec3 x = oracle::random_point(rng, -1.5, 1.5);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          worst = std::max(worst, (oracle::frame_connection_fd(id, x, i, j) -
                                   frame_connection(id.space, Vec3::Unit(i), Vec3::Unit(j)))
                                      .cwiseAbs()
                                      .maxCoeff());
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("metric partials agree with finite differences") {
  std::mt19937_64 rng(5);
  for (const SpaceId& id : {kSol, kNil, kNilY}) {
    const Vec3 x = oracle::random_point(rng);
    const auto d = metric_partials(id, x);
    for (int k = 0; k < 3; ++k) {
      const Vec3 e = 1e-5 * Vec3::Unit(k);
      CHECK(max_abs(d[k] - (metric(id, x + e) - metric(id, x - e)) / 2e-5) < 1e-8);
    }
  }
}

TEST_CASE("apply_isometry examples") {
  const Point t = apply_isometry(kSol, Isometry::sol_tc(1.0), Point(1, 1, 0));
  CHECK(t[0] == doctest::Approx(std::exp(-1.0)));
  CHECK(t[1] == doctest::Approx(std::exp(1.0)));
  CHECK(t[2] == 1.0);

  const Point n = apply_isometry(kNil, Isometry::nil_translate1(2.0), Point(0, 1, 0));
  CHECK((n.x - Vec3(2, 1, 1)).norm() == 0.0);

  const Isometry ss = Isometry::sol_sigma().then(Isometry::sol_sigma());
  CHECK((apply_isometry(kSol, ss, Point(1, 2, 3)).x - Vec3(-1, -2, 3)).norm() == 0.0);

  CHECK_THROWS_AS(apply_isometry(kSol, Isometry::nil_vertical(1.0), Point(0, 0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(apply_isometry(kNil, Isometry::sol_tau(), Point(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("composite applies left to right") {
  const Isometry g = Isometry::sol_translate_x1(1.0).then(Isometry::sol_tau());
  // translate first: (1,0,0) -> (2,0,0) -> tau -> (-2,0,0)
  CHECK((apply_isometry(kSol, g, Point(1, 0, 0)).x - Vec3(-2, 0, 0)).norm() == 0.0);
}

TEST_CASE("group sanity") {
  std::mt19937_64 rng(3);
  const Isometry sigma4 = Isometry::compose({Isometry::sol_sigma(), Isometry::sol_sigma(), Isometry::sol_sigma(),
                                             Isometry::sol_sigma()});
  const Isometry tau2 = Isometry::sol_tau().then(Isometry::sol_tau());
  for (int n = 0; n < 100; ++n) {
    const Point p(oracle::random_point(rng));
    CHECK((apply_isometry(kSol, sigma4, p).x - p.x).norm() == 0.0);
    CHECK((apply_isometry(kSol, tau2, p).x - p.x).norm() == 0.0);
    const Isometry tt = Isometry::sol_tc(0.8).then(Isometry::sol_tc(-0.8));
    CHECK((apply_isometry(kSol, tt, p).x - p.x).norm() < 1e-12);
    for (const Isometry& g : {Isometry::sol_sigma(), Isometry::sol_tc(0.3)}) {
      CHECK((apply_isometry(kSol, g.then(g.inverse()), p).x - p.x).norm() < 1e-12);
    }
    const Isometry nil = Isometry::compose({Isometry::nil_translate1(0.4), Isometry::nil_rotate(1.1),
                                            Isometry::nil_translate2(-0.2), Isometry::nil_vertical(0.5)});
    CHECK((apply_isometry(kNil, nil.then(nil.inverse()), p).x - p.x).norm() < 1e-12);
  }
}

TEST_CASE("sigma squared tau is the reflection in x2 = 0") {
  const Isometry g = Isometry::compose({Isometry::sol_tau(), Isometry::sol_sigma(), Isometry::sol_sigma()});
  CHECK((apply_isometry(kSol, g, Point(1, 2, 3)).x - Vec3(1, -2, 3)).norm() == 0.0);
}

TEST_CASE("isotropy group of the Sol3 origin has eight elements and is closed") {
  const auto group = sol_isotropy_group();
  REQUIRE(group.size() == 8);
  std::mt19937_64 rng(19);
  std::vector<Point> probes;
  for (int n = 0; n < 4; ++n) probes.emplace_back(oracle::random_point(rng));
  auto signature = [&](const Isometry& g) {
    std::vector<Vec3> out;
    for (const Point& p : probes) out.push_back(apply_isometry(kSol, g, p).x);
    return out;
  };
  auto same = [](const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if ((a[i] - b[i]).norm() > 1e-12) return false;
    return true;
  };
  for (std::size_t i = 0; i < group.size(); ++i)
    for (std::size_t j = i + 1; j < group.size(); ++j) CHECK_FALSE(same(signature(group[i]), signature(group[j])));
  for (const Isometry& a : group)
    for (const Isometry& b : group) {
      const auto sig = signature(a.then(b));
      int matches = 0;
      for (const Isometry& c : group) matches += same(sig, signature(c)) ? 1 : 0;
      CHECK(matches == 1);
    }
  for (const Isometry& g : group) CHECK(apply_isometry(kSol, g, Point(0, 0, 0)).x.norm() == 0.0);
}

TEST_CASE("isometries pull the metric back to itself") {
  std::mt19937_64 rng(23);
  const std::vector<std::pair<SpaceId, Isometry>> cases = {
      {kSol, Isometry::sol_translate_x1(0.7)}, {kSol, Isometry::sol_translate_x2(-1.3)},
      {kSol, Isometry::sol_tc(0.6)},           {kSol, Isometry::sol_sigma()},
      {kSol, Isometry::sol_tau()},             {kNil, Isometry::nil_translate1(1.2)},
      {kNil, Isometry::nil_translate2(-0.9)},  {kNil, Isometry::nil_vertical(2.0)},
      {kNil, Isometry::nil_rotate(0.8)},       {kNil, Isometry::nil_reflect()},
      {kNilY, Isometry::nil_translate1(0.5)},  {kNilY, Isometry::nil_rotate(-0.4)},
  };
  for (const auto& [id, g] : cases) {
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
      const Vec3 x = oracle::random_point(rng, -1.5, 1.5);
      const Mat3 j = oracle::jacobian_fd([&](const Vec3& y) { return apply_isometry_raw(id, g, y); }, x);
      const Mat3 pulled = j.transpose() * metric(id, apply_isometry_raw(id, g, x)) * j;
      worst = std::max(worst, max_abs(pulled - metric(id, x)));
    }
    CHECK_MESSAGE(worst < 1e-6, to_string(g.kind));
  }
}

TEST_CASE("killing field examples") {
  CHECK((killing_field_at(kSol, 3, Point(1, 1, 0)) - Vec3(-1, 1, 1)).norm() == 0.0);
  CHECK((killing_field_at(kNil, 1, Point(0, 2, 0)) - Vec3(1, 0, 1)).norm() == 0.0);
  CHECK((killing_field_at(kNil, 4, Point(1, 2, 3)) - Vec3(-2, 1, 0)).norm() == 0.0);
  CHECK_THROWS_AS(killing_field_at(kSol, 4, Point(0, 0, 0)), std::out_of_range);
  CHECK_THROWS_AS(killing_field_at(kNil, 0, Point(0, 0, 0)), std::out_of_range);
}

TEST_CASE("killing fields have vanishing Lie derivative of the metric") {
  std::mt19937_64 rng(29);
  for (const SpaceId& id : {kSol, kNil, kNilY}) {
    const int count = id.space == Space::Sol3 ? 3 : 4;
    for (int k = 1; k <= count; ++k) {
      double worst = 0.0;
      for (int n = 0; n < 50; ++n) {
        const Vec3 x = oracle::random_point(rng, -1.5, 1.5);
        const auto field = [&](const Vec3& y) { return killing_field_at(id, k, Point(y, id.chart)); };
        worst = std::max(worst, max_abs(oracle::lie_derivative_fd(id, field, x)));
      }
      CHECK(worst < 1e-6);
    }
  }
}

TEST_CASE("killing fields generate the isometry families") {
  // d/dc g_c(p) at c = 0 equals the field.
  std::mt19937_64 rng(31);
  const Vec3 x = oracle::random_point(rng);
  const double h = 1e-6;
  auto deriv = [&](const SpaceId& id, auto make) {
    return ((apply_isometry_raw(id, make(h), x) - apply_isometry_raw(id, make(-h), x)) / (2 * h)).eval();
  };
  CHECK((deriv(kSol, Isometry::sol_tc) - killing_field_at(kSol, 3, Point(x))).norm() < 1e-8);
  CHECK((deriv(kNil, Isometry::nil_translate1) - killing_field_at(kNil, 1, Point(x))).norm() < 1e-8);
  CHECK((deriv(kNil, Isometry::nil_translate2) - killing_field_at(kNil, 2, Point(x))).norm() < 1e-8);
  CHECK((deriv(kNil, Isometry::nil_rotate) - killing_field_at(kNil, 4, Point(x))).norm() < 1e-8);
}

TEST_CASE("nil_chart_convert") {
  CHECK((nil_chart_convert(kNil, Point(1, 2, 0), Chart::NilY).x - Vec3(1, 2, 1)).norm() == 0.0);
  CHECK(nil_chart_convert(kNil, Point(0, 0, 0), Chart::NilY).x.norm() == 0.0);
  CHECK_THROWS_AS(nil_chart_convert(kSol, Point(1, 2, 0), Chart::NilY), std::invalid_argument);
  std::mt19937_64 rng(37);
  for (int n = 0; n < 100; ++n) {
    const Point p(oracle::random_point(rng, -5, 5));
    const Point back = nil_chart_convert(nil_chart_convert(p, Chart::NilY), Chart::Canonical);
    CHECK((back.x - p.x).norm() < 1e-12);
    CHECK(back.chart == Chart::Canonical);
  }
}

TEST_CASE("NilY metric is the pushforward of the canonical metric") {
  std::mt19937_64 rng(41);
  for (int n = 0; n < 50; ++n) {
    const Vec3 x = oracle::random_point(rng);
    const Vec3 y = nil_chart_convert(Point(x), Chart::NilY).x;
    const Mat3 j = nil_y_jacobian(x);
    CHECK(max_abs(j.transpose() * metric(kNilY, y) * j - metric(kNil, x)) < 1e-12);
  }
}

TEST_CASE("Phi^c in the NilY chart is the first translation family") {
  // (y1, y2, y3) -> (y1 + c, y2, y3 + c y2)
  const Vec3 y(0.3, -1.2, 0.8);
  const double c = 0.45;
  const Vec3 out = apply_isometry_raw(kNilY, Isometry::nil_translate1(c), y);
  CHECK((out - Vec3(y[0] + c, y[1], y[2] + c * y[1])).norm() < 1e-14);
}
