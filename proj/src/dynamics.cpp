#include "gp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gp {

Field nonlinearity_F(const Field& u, bool use_dealias) {
  if (u.rep() != Rep::physical)
    throw std::invalid_argument("nonlinearity_F: u must be physical");
  Field out(u.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const cplx w = u[i];
    const double a2 = std::norm(w);
    out[i] = w * w + 2.0 * a2 + a2 * w;
  }
  return use_dealias ? dealias(out) : out;
}

namespace {

double mean_real(const Field& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += v.real();
  return acc / static_cast<double>(f.size());
}

double mean_imag(const Field& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += v.imag();
  return acc / static_cast<double>(f.size());
}

Field add_real_constant(Field f, double c) {
  for (auto& v : f.values()) v += c;
  return f;
}

// Nonlinear part of the v equation with the zero mode carried through the
// identity leg: -V^{-1}(iF(u)) off xi=0, and -iF(0)-hat at xi=0.
Field nonlinear_rhs_full(const Field& v, bool use_dealias) {
  Field u = u_from_v_full(v);
  Field F = nonlinearity_F(u, use_dealias);
  Field g(v.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = cplx{0.0, 1.0} * F[i];
  Field out = v_inverse_map(g);
  out *= cplx{-1.0, 0.0};
  // restore the real zero mode of -iF, which the Uinv policy dropped
  return add_real_constant(std::move(out), mean_imag(F));
}

// Exact linear flow over time tau: e^{-iHt} off xi=0 and the decoupled
// 2x2 zero-mode flow (u1 const, u2 -= 2 tau u1).
Field linear_flow(const Field& v, double tau) {
  Field s = to_spectral(v);
  const Grid& g = s.grid();
  for (std::size_t i = 1; i < s.size(); ++i)
    s[i] *= std::polar(1.0, -dispersion(g.xi_abs(i)) * tau);
  const cplx z0 = s[0];
  s[0] = cplx{z0.real(), z0.imag() - 2.0 * tau * z0.real()};
  return to_physical(s);
}

void check_finite(const Field& v) {
  Field u = u_from_v_full(v);
  double m = 0.0;
  for (const auto& x : u.values()) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw NumericalAbort("step: non-finite value in u");
    m = std::max(m, std::abs(x));
  }
  if (m > 1e3)
    throw NumericalAbort("step: |u|_inf = " + std::to_string(m) +
                         " exceeds the perturbative guard 1e3");
}

}  // namespace

Field rhs_v(const Field& v, bool use_dealias) {
  Field linear = apply_multiplier_cplx(
      v, [](double r) -> cplx { return cplx{0.0, -dispersion(r)}; });
  Field u = v_map(v);
  Field F = nonlinearity_F(u, use_dealias);
  Field g(v.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = cplx{0.0, 1.0} * F[i];
  Field nl = v_inverse_map(g);
  for (std::size_t i = 0; i < linear.size(); ++i) linear[i] -= nl[i];
  return linear;
}

Field u_from_v_full(const Field& v) {
  Field u = v_map(v);
  return add_real_constant(std::move(u), mean_real(v));
}

Field v_from_u_full(const Field& u) {
  Field v = v_inverse_map(u);
  return add_real_constant(std::move(v), mean_real(u));
}

double energy(const Field& u) {
  if (u.rep() != Rep::physical)
    throw std::invalid_argument("energy: u must be physical");
  auto grad = gradient(u);
  const double w = u.grid().cell_volume();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double g2 = 0.0;
    for (const auto& comp : grad) g2 += std::norm(comp[i]);
    const double rho = std::norm(u[i]) + 2.0 * u[i].real();
    acc += g2 + 0.5 * rho * rho;
  }
  return acc * w;
}

double charge(const Field& u) {
  if (u.rep() != Rep::physical)
    throw std::invalid_argument("charge: u must be physical");
  const double w = u.grid().cell_volume();
  double acc = 0.0;
  for (const auto& x : u.values()) acc += std::norm(x) + 2.0 * x.real();
  return acc * w;
}

Field step(const Field& v, double dt, Scheme scheme, bool use_dealias,
           bool disable_nonlinearity) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  auto nl = [&](const Field& w) -> Field {
    if (disable_nonlinearity) return Field::zeros(w.grid_ptr(), Rep::physical);
    return nonlinear_rhs_full(w, use_dealias);
  };

  Field out(v.grid_ptr(), Rep::physical);
  switch (scheme) {
    case Scheme::strang_rk4: {
      Field a = linear_flow(v, 0.5 * dt);
      // classical RK4 on the nonlinear part alone
      Field k1 = nl(a);
      Field k2 = nl(a + (0.5 * dt) * k1);
      Field k3 = nl(a + (0.5 * dt) * k2);
      Field k4 = nl(a + dt * k3);
      Field b = a + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      out = linear_flow(b, 0.5 * dt);
      break;
    }
    case Scheme::etd_rk2: {
      // Lawson two-stage scheme: exact linear flow, explicit trapezoid on
      // the transported nonlinearity.
      Field w = linear_flow(v, dt);
      Field k1 = linear_flow(nl(v), dt);
      Field pred = w + dt * k1;
      Field k2 = nl(pred);
      out = w + (0.5 * dt) * (k1 + k2);
      break;
    }
  }
  check_finite(out);
  return out;
}

EvolveResult evolve(const Field& v0, double T, const SolverConfig& config) {
  if (!(T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
  std::vector<double> samples = config.sample_times;
  for (double s : samples)
    if (s < 0.0 || s > T + 1e-12)
      throw std::invalid_argument("evolve: sample time outside [0,T]");
  if (samples.empty() || std::abs(samples.back() - T) > 1e-12)
    samples.push_back(T);

  EvolveResult res;
  res.vtraj.grid = v0.grid_ptr();
  res.vtraj.tag = VarTag::v;

  auto record = [&](double t, const Field& v) {
    Field u = u_from_v_full(v);
    ConservationSample c;
    c.t = t;
    c.energy = energy(u);
    c.charge = charge(u);
    c.l2 = lp_norm(u, 2.0);
    c.h1dot = sobolev_norm(u, 1.0, true);
    c.l4 = lp_norm(u, 4.0);
    c.linf = lp_norm(u, std::numeric_limits<double>::infinity());
    res.conservation.push_back(c);
    res.vtraj.push(t, v);
  };

  Field v = v0;
  double t = 0.0;
  std::size_t si = 0;
  while (si < samples.size() && samples[si] <= 1e-14) {
    record(0.0, v);
    ++si;
  }
  const double dt = config.dt;
  while (si < samples.size()) {
    const double target = samples[si];
    double h = std::min(dt, target - t);
    if (target - t <= dt * (1.0 + 1e-9)) h = target - t;
    v = step(v, h, config.scheme, config.dealias);
    t += h;
    if (std::abs(t - target) <= 1e-12 * (1.0 + target)) {
      t = target;
      record(t, v);
      ++si;
    }
  }
  return res;
}

}  // namespace gp
