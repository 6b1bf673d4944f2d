#include "gp/operators.hpp"

#include <cmath>

namespace gp {

Field apply_symbol(const Field& f, SymbolId id, double* dropped_zero_mode) {
  if (id == SymbolId::Uinv) {
    return apply_multiplier_drop_zero(
        f, [](double r) { return symbol_value(SymbolId::Uinv, r); },
        dropped_zero_mode);
  }
  if (dropped_zero_mode) *dropped_zero_mode = 0.0;
  return apply_multiplier(f, [id](double r) { return symbol_value(id, r); });
}

VSplit split(const Field& u) {
  if (u.rep() != Rep::physical)
    throw std::invalid_argument("split: field must be physical");
  Field re(u.grid_ptr(), Rep::physical);
  Field im(u.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < u.size(); ++i) {
    re[i] = cplx{u[i].real(), 0.0};
    im[i] = cplx{u[i].imag(), 0.0};
  }
  return {std::move(re), std::move(im)};
}

Field combine(const Field& real_part, const Field& imag_part) {
  Field out(real_part.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = cplx{real_part[i].real(), imag_part[i].real()};
  return out;
}

Field real_field(const Field& u) { return split(u).real_part; }
Field imag_field(const Field& u) { return split(u).imag_part; }

namespace {

// Apply a radial symbol to the real part of a physical field, keep the
// imaginary part untouched. The symbol output on a real input is real up to
// roundoff; its spurious imaginary component is discarded.
Field real_linear_symbol(const Field& f, SymbolId id, double* dropped) {
  auto [re, im] = split(f);
  Field tre = apply_symbol(re, id, dropped);
  return combine(tre, im);
}

}  // namespace

Field v_map(const Field& v) {
  return real_linear_symbol(v, SymbolId::U, nullptr);
}

Field v_inverse_map(const Field& u, double* dropped_zero_mode) {
  return real_linear_symbol(u, SymbolId::Uinv, dropped_zero_mode);
}

Field propagate(const Field& f, double t) {
  return apply_multiplier_cplx(f, [t](double r) -> cplx {
    return std::polar(1.0, -dispersion(r) * t);
  });
}

}  // namespace gp
