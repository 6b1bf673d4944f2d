#include "gp/normal_form.hpp"

#include <cmath>

namespace gp {

namespace {

Field abs_squared(const Field& u) {
  Field out(u.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = cplx{std::norm(u[i]), 0.0};
  return out;
}

Field pointwise(const Field& a, const Field& b) {
  Field out(a.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

Field to_normal_form(const Field& u, double* dropped_zero_mode) {
  if (u.rep() != Rep::physical)
    throw std::invalid_argument("to_normal_form: u must be physical");
  Field w = apply_symbol(abs_squared(u), SymbolId::P);
  Field arg(u.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < u.size(); ++i)
    arg[i] = cplx{u[i].real() + 0.5 * w[i].real(), u[i].imag()};
  return v_inverse_map(arg, dropped_zero_mode);
}

NormalFormPair from_normal_form(const Field& z, double tol, int maxiter) {
  if (z.rep() != Rep::physical)
    throw std::invalid_argument("from_normal_form: z must be physical");
  NormalFormPair out{v_map(z), z, false, 0, {}};
  Field uz = apply_symbol(real_field(z), SymbolId::U);  // U z1, fixed
  Field u = out.u;                                      // u^(0) = Vz
  for (int it = 1; it <= maxiter; ++it) {
    Field p = apply_symbol(abs_squared(u), SymbolId::P);
    Field next(u.grid_ptr(), Rep::physical);
    for (std::size_t i = 0; i < u.size(); ++i)
      next[i] = cplx{uz[i].real() - 0.5 * p[i].real(), z[i].imag()};
    const double diff = lp_norm(next - u, 2.0);
    out.successive_diffs.push_back(diff);
    u = std::move(next);
    out.fixed_point_iters = it;
    if (diff <= tol) {
      out.converged = true;
      break;
    }
  }
  out.u = std::move(u);
  return out;
}

Field N2_derivative_part(const Field& u, bool use_dealias) {
  auto [u1, u2] = split(u);
  auto grad_u2 = gradient(u2);
  std::vector<Field> flux;
  flux.reserve(grad_u2.size());
  for (auto& comp : grad_u2) {
    Field f = pointwise(u1, comp);
    flux.push_back(use_dealias ? dealias(f) : std::move(f));
  }
  Field div = divergence(flux);
  // P U^{-1} applied after the divergence; the zero mode is already exactly
  // zero there, so the Uinv drop policy removes nothing.
  Field out = apply_multiplier_drop_zero(div, [](double r) {
    return symbol_value(SymbolId::P, r) * symbol_value(SymbolId::Uinv, r);
  });
  out *= cplx{-2.0, 0.0};
  return out;
}

Field N2(const Field& u, bool use_dealias) {
  if (u.rep() != Rep::physical)
    throw std::invalid_argument("N2: u must be physical");
  Field out = N2_derivative_part(u, use_dealias);
  Field sq(u.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double u1 = u[i].real();
    sq[i] = cplx{0.0, -2.0 * u1 * u1};
  }
  if (use_dealias) sq = dealias(sq);
  return out + sq;
}

Field N3(const Field& u, bool use_dealias) {
  if (u.rep() != Rep::physical)
    throw std::invalid_argument("N3: u must be physical");
  Field a(u.grid_ptr(), Rep::physical);  // -i |u|^2 u1
  Field b(u.grid_ptr(), Rep::physical);  // |u|^2 u2, to go through U
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m2 = std::norm(u[i]);
    a[i] = cplx{0.0, -m2 * u[i].real()};
    b[i] = cplx{m2 * u[i].imag(), 0.0};
  }
  if (use_dealias) {
    a = dealias(a);
    b = dealias(b);
  }
  return a + apply_symbol(b, SymbolId::U);
}

double duhamel_residual(const Trajectory& ztraj, const Trajectory& utraj,
                        double T, bool use_dealias) {
  check_aligned(ztraj, utraj);
  const auto& times = ztraj.times;
  std::size_t i0 = 0;
  while (i0 < times.size() && times[i0] < T - 1e-12) ++i0;
  if (i0 >= times.size())
    throw std::invalid_argument("duhamel_residual: no samples at/after T");

  // The transformed equation holds for xi != 0 only (the zero mode stays
  // with the original variable), so all comparisons project out the mean.
  auto remove_mean = [](Field f) {
    cplx m{0.0, 0.0};
    for (const auto& v : f.values()) m += v;
    m /= static_cast<double>(f.size());
    for (auto& v : f.values()) v -= m;
    return f;
  };
  auto source = [&](std::size_t i) {
    return remove_mean(N2(utraj.at(i), use_dealias) +
                       N3(utraj.at(i), use_dealias));
  };

  // J(t_m) accumulates e^{-iH(t_m - T)} z(T) plus the trapezoid Duhamel sum,
  // advanced recursively so the whole sweep is O(#samples).
  Field J = remove_mean(ztraj.at(i0));
  Field N_prev = source(i0);
  double max_mismatch = 0.0;
  for (std::size_t m = i0 + 1; m < times.size(); ++m) {
    const double h = times[m] - times[m - 1];
    Field N_here = source(m);
    J = propagate(J, h) + (0.5 * h) * (propagate(N_prev, h) + N_here);
    max_mismatch =
        std::max(max_mismatch, lp_norm(J - remove_mean(ztraj.at(m)), 2.0));
    N_prev = std::move(N_here);
  }
  return max_mismatch;
}

}  // namespace gp
