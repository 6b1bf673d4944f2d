#include "gp/phase.hpp"

#include <stdexcept>

namespace gp {

namespace {

constexpr double kGuard = 1e-8;

void check_regular(const Vec3& xi, const Vec3& eta) {
  if (norm(eta) < kGuard || norm(eta - xi) < kGuard)
    throw std::invalid_argument(
        "phase derivative: eta too close to 0 or xi (guard 1e-8)");
}

struct Legs {
  double s1, s2;
  Vec3 eta, emx;       // eta and eta - xi
  double re, rm;       // |eta|, |eta - xi|
  Vec3 he, hm;         // unit vectors
  SymbolDerivatives de, dm;
};

Legs make_legs(PhaseKind kind, const Vec3& xi, const Vec3& eta) {
  auto s = phase_signs(kind);
  Legs L;
  L.s1 = s[0];
  L.s2 = s[1];
  L.eta = eta;
  L.emx = eta - xi;
  L.re = norm(L.eta);
  L.rm = norm(L.emx);
  L.he = hat(L.eta);
  L.hm = hat(L.emx);
  L.de = symbol_derivatives(L.re);
  L.dm = symbol_derivatives(L.rm);
  return L;
}

// component of a orthogonal to the unit vector h
Vec3 perp(const Vec3& a, const Vec3& h) { return a - dot(a, h) * h; }

}  // namespace

double phase_value(PhaseKind kind, const Vec3& xi, const Vec3& eta) {
  auto s = phase_signs(kind);
  return dispersion(norm(xi)) + s[0] * dispersion(norm(eta)) +
         s[1] * dispersion(norm(eta - xi));
}

Vec3 phase_gradient(PhaseKind kind, const Vec3& xi, const Vec3& eta) {
  check_regular(xi, eta);
  auto s = phase_signs(kind);
  const Vec3 emx = eta - xi;
  return s[0] * dispersion_prime(norm(eta)) * hat(eta) +
         s[1] * dispersion_prime(norm(emx)) * hat(emx);
}

double phase_dir_deriv1(PhaseKind kind, const Vec3& xi, const Vec3& eta,
                        const Vec3& a) {
  check_regular(xi, eta);
  auto L = make_legs(kind, xi, eta);
  return L.s1 * L.de.H1 * dot(a, L.he) + L.s2 * L.dm.H1 * dot(a, L.hm);
}

double phase_dir_deriv2(PhaseKind kind, const Vec3& xi, const Vec3& eta,
                        const Vec3& a, const Vec3& b) {
  check_regular(xi, eta);
  auto L = make_legs(kind, xi, eta);
  const double ae = dot(a, L.he), be = dot(b, L.he);
  const double am = dot(a, L.hm), bm = dot(b, L.hm);
  return L.s1 * (L.de.H2 * ae * be +
                 L.de.H1 / L.re * dot(perp(a, L.he), perp(b, L.he))) +
         L.s2 * (L.dm.H2 * am * bm +
                 L.dm.H1 / L.rm * dot(perp(a, L.hm), perp(b, L.hm)));
}

double phase_dir_deriv3(PhaseKind kind, const Vec3& xi, const Vec3& eta,
                        const Vec3& a, const Vec3& b, const Vec3& c) {
  check_regular(xi, eta);
  auto L = make_legs(kind, xi, eta);
  auto tensor = [](const Vec3& a_, const Vec3& b_, const Vec3& c_,
                   const Vec3& h) {
    const Vec3 ap = perp(a_, h), bp = perp(b_, h), cp = perp(c_, h);
    return dot(a_, h) * dot(bp, cp) + dot(b_, h) * dot(cp, ap) +
           dot(c_, h) * dot(ap, bp);
  };
  const double te = tensor(a, b, c, L.he);
  const double tm = tensor(a, b, c, L.hm);
  return L.s1 * (L.de.H3 * dot(a, L.he) * dot(b, L.he) * dot(c, L.he) +
                 L.de.I * te) +
         L.s2 * (L.dm.H3 * dot(a, L.hm) * dot(b, L.hm) * dot(c, L.hm) +
                 L.dm.I * tm);
}

double phase_radial_deriv(PhaseKind kind, const Vec3& xi, const Vec3& eta,
                          int order) {
  check_regular(xi, eta);
  const Vec3 a = hat(eta);
  switch (order) {
    case 1:
      return phase_dir_deriv1(kind, xi, eta, a);
    case 2:
      return phase_dir_deriv2(kind, xi, eta, a, a);
    case 3:
      return phase_dir_deriv3(kind, xi, eta, a, a, a);
    default:
      throw std::invalid_argument("phase_radial_deriv: order must be 1..3");
  }
}

}  // namespace gp
