#pragma once

#include "gp/field.hpp"
#include "gp/spectral.hpp"
#include "gp/symbols.hpp"

namespace gp {

/// Apply a named radial symbol. Uinv uses the zero-mode drop policy.
Field apply_symbol(const Field& f, SymbolId id,
                   double* dropped_zero_mode = nullptr);

/// Real and imaginary parts of a physical field, as real-valued fields.
struct VSplit {
  Field real_part;
  Field imag_part;
};
VSplit split(const Field& u);
Field combine(const Field& real_part, const Field& imag_part);

/// Real part of a physical field as a field (imaginary entries zeroed).
Field real_field(const Field& u);
Field imag_field(const Field& u);

/// V v = U v1 + i v2 (real-linear; v physical).
Field v_map(const Field& v);
/// V^{-1} u = U^{-1} u1 + i u2; the U^{-1} zero mode is dropped and its
/// L^2 weight reported.
Field v_inverse_map(const Field& u, double* dropped_zero_mode = nullptr);

/// e^{-iHt}: spectral coefficients times exp(-i H(|xi|) t). Exactly unitary
/// on every homogeneous Sobolev norm. Representation preserved.
Field propagate(const Field& f, double t);

}  // namespace gp
