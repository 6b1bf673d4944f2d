#pragma once

#include <array>

#include "gp/symbols.hpp"

namespace gp {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator*(double c, const Vec3& a) {
  return {c * a[0], c * a[1], c * a[2]};
}
inline Vec3 hat(const Vec3& a) {
  const double r = norm(a);
  return {a[0] / r, a[1] / r, a[2] / r};
}

/// Bilinear phases of the quadratic source terms:
///   Phi0     = H(xi) + H(eta) - H(eta - xi)    (|u|^2)
///   PhiPlus  = H(xi) - H(eta) - H(eta - xi)    (u^2)
///   PhiMinus = H(xi) + H(eta) + H(eta - xi)    (conj(u)^2)
enum class PhaseKind { Phi0, PhiPlus, PhiMinus };

/// Signs (s1, s2) such that Phi = H(xi) + s1 H(eta) + s2 H(eta - xi).
inline std::array<double, 2> phase_signs(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::Phi0:
      return {+1.0, -1.0};
    case PhaseKind::PhiPlus:
      return {-1.0, -1.0};
    case PhaseKind::PhiMinus:
      return {+1.0, +1.0};
  }
  throw std::logic_error("phase_signs: unknown kind");
}

double phase_value(PhaseKind kind, const Vec3& xi, const Vec3& eta);

/// Gradient with respect to eta. Guarded near the singular configurations
/// |eta| -> 0 or eta -> xi (radius 1e-8).
Vec3 phase_gradient(PhaseKind kind, const Vec3& xi, const Vec3& eta);

/// Directional eta-derivatives along a fixed direction a (not normalized
/// internally; pass a unit vector for plain directional derivatives).
double phase_dir_deriv1(PhaseKind kind, const Vec3& xi, const Vec3& eta,
                        const Vec3& a);
double phase_dir_deriv2(PhaseKind kind, const Vec3& xi, const Vec3& eta,
                        const Vec3& a, const Vec3& b);
double phase_dir_deriv3(PhaseKind kind, const Vec3& xi, const Vec3& eta,
                        const Vec3& a, const Vec3& b, const Vec3& c);

/// Radial derivative d^order/dr^order along a = hat(eta), order in {1,2,3}.
double phase_radial_deriv(PhaseKind kind, const Vec3& xi, const Vec3& eta,
                          int order);

}  // namespace gp
