#pragma once

#include "homegeo/geometry.hpp"

#include <string>
#include <vector>

namespace homegeo {

/// An element of one of the isometry families of Sol3 or Nil3, or a finite
/// composition of them. Composite parts are applied left to right.
struct Isometry {
  enum class Kind {
    SolTranslateX1,  // (x1 + c, x2, s)
    SolTranslateX2,  // (x1, x2 + c, s)
    SolTc,           // (e^-c x1, e^c x2, s + c)
    SolSigma,        // (x2, -x1, -s)
    SolTau,          // (-x1, x2, s)
    NilTranslate1,   // (x1 + c, x2, x3 + c x2 / 2)
    NilTranslate2,   // (x1, x2 + c, x3 - c x1 / 2)
    NilVertical,     // (x1, x2, x3 + c)
    NilRotate,       // rotation by theta about the x3 axis
    NilReflect,      // (-x1, x2, -x3)
    Composite,
  };

  Kind kind = Kind::Composite;
  double param = 0.0;
  std::vector<Isometry> parts;

  static Isometry identity() { return {}; }
  static Isometry sol_translate_x1(double c) { return {Kind::SolTranslateX1, c, {}}; }
  static Isometry sol_translate_x2(double c) { return {Kind::SolTranslateX2, c, {}}; }
  static Isometry sol_tc(double c) { return {Kind::SolTc, c, {}}; }
  static Isometry sol_sigma() { return {Kind::SolSigma, 0.0, {}}; }
  static Isometry sol_tau() { return {Kind::SolTau, 0.0, {}}; }
  static Isometry nil_translate1(double c) { return {Kind::NilTranslate1, c, {}}; }
  static Isometry nil_translate2(double c) { return {Kind::NilTranslate2, c, {}}; }
  static Isometry nil_vertical(double c) { return {Kind::NilVertical, c, {}}; }
  static Isometry nil_rotate(double theta) { return {Kind::NilRotate, theta, {}}; }
  static Isometry nil_reflect() { return {Kind::NilReflect, 0.0, {}}; }
  static Isometry compose(std::vector<Isometry> parts) { return {Kind::Composite, 0.0, std::move(parts)}; }

  /// this followed by next.
  Isometry then(const Isometry& next) const { return compose({*this, next}); }

  Isometry inverse() const;

  /// Whether every part acts on s. The empty composite acts on both spaces.
  bool valid_for(Space s) const;
};

std::string to_string(Isometry::Kind k);
Isometry::Kind parse_isometry_kind(const std::string& name);

/// Applies g to p, converting through the canonical chart for NilY points.
/// Throws std::invalid_argument when g does not act on the given space.
Point apply_isometry(const SpaceId& id, const Isometry& g, const Point& p);

/// Raw-coordinate version used by mesh transport; no validation.
Vec3 apply_isometry_raw(const SpaceId& id, const Isometry& g, const Vec3& x);

/// The eight elements of the isotropy group of the Sol3 origin, generated by
/// sigma and tau: sigma^k and sigma^k tau for k = 0..3.
std::vector<Isometry> sol_isotropy_group();

}  // namespace homegeo
