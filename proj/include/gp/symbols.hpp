#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace gp {

/// Radial Fourier multiplier symbols of the diagonalized problem.
///   U(r)    = r / sqrt(2 + r^2)
///   Uinv(r) = sqrt(2 + r^2) / r          (singular at r = 0)
///   H(r)    = r sqrt(2 + r^2)            (Bogoliubov dispersion)
///   P(r)    = 2 / (2 + r^2)
///   Q(r)    = r^2 / (2 + r^2)            (= 1 - P = U^2)
///   InvTwoMinusLap(r) = 1 / (2 + r^2)
enum class SymbolId { U, Uinv, H, P, Q, InvTwoMinusLap };

/// [r] = sqrt(2 + r^2)
inline double bracket(double r) { return std::sqrt(2.0 + r * r); }
/// <r> = sqrt(1 + r^2)
inline double japanese(double r) { return std::sqrt(1.0 + r * r); }

inline double symbol_value(SymbolId id, double r) {
  if (r < 0.0) throw std::invalid_argument("symbol_value: r must be >= 0");
  switch (id) {
    case SymbolId::U:
      return r / bracket(r);
    case SymbolId::Uinv:
      if (r == 0.0) throw std::invalid_argument("symbol_value: Uinv at r=0");
      return bracket(r) / r;
    case SymbolId::H:
      return r * bracket(r);
    case SymbolId::P:
      return 2.0 / (2.0 + r * r);
    case SymbolId::Q:
      return r * r / (2.0 + r * r);
    case SymbolId::InvTwoMinusLap:
      return 1.0 / (2.0 + r * r);
  }
  throw std::logic_error("symbol_value: unknown id");
}

inline double dispersion(double r) { return symbol_value(SymbolId::H, r); }

/// Closed-form derivatives of H(r) = r [r] plus the auxiliary
/// I(r) = H''(r)/r - H'(r)/r^2. H1..H4 are continuous down to r = 0
/// (H1(0) = sqrt(2), the sound speed); I and I1 blow up there.
struct SymbolDerivatives {
  double H1, H2, H3, H4, I, I1;
};

inline SymbolDerivatives symbol_derivatives(double r) {
  if (!(r > 0.0))
    throw std::invalid_argument("symbol_derivatives: r must be > 0");
  const double b = bracket(r);
  const double b2 = b * b, b3 = b2 * b, b5 = b3 * b2, b7 = b5 * b2;
  SymbolDerivatives d;
  d.H1 = 2.0 * (1.0 + r * r) / b;
  d.H2 = 2.0 * r * (3.0 + r * r) / b3;
  d.H3 = 12.0 / b5;
  d.H4 = -60.0 * r / b7;
  d.I = -4.0 / (r * r * b3);
  d.I1 = 4.0 * (4.0 + 5.0 * r * r) / (r * r * r * b5);
  return d;
}

/// H'(r) by its closed form, valid down to r = 0 where it equals sqrt(2).
inline double dispersion_prime(double r) {
  return 2.0 * (1.0 + r * r) / bracket(r);
}

}  // namespace gp
