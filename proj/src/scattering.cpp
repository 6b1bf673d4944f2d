#include "gp/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gp {

namespace {

Field abs_squared(const Field& u) {
  Field out(u.grid_ptr(), Rep::physical);
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = cplx{std::norm(u[i]), 0.0};
  return out;
}

std::size_t node_index(const std::vector<double>& times, double t) {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-9 * (1.0 + std::abs(t))) return i;
  throw std::invalid_argument("duhamel_from_infinity: t is not a node");
}

// Backward trapezoid sweep: suffix[m] = -int_{t_m}^{t_M} e^{-iH(t_m-s)} N ds.
std::vector<Field> duhamel_suffix(const Trajectory& Ntraj, bool drop_H) {
  const auto& times = Ntraj.times;
  if (times.empty())
    throw std::invalid_argument("duhamel: empty node trajectory");
  auto prop = [&](const Field& f, double dt) {
    return drop_H ? f : propagate(f, dt);
  };
  std::vector<Field> out;
  out.reserve(times.size());
  out.emplace_back(Field::zeros(Ntraj.grid, Rep::physical));
  for (std::size_t back = 1; back < times.size(); ++back) {
    const std::size_t m = times.size() - 1 - back;
    const double h = times[m + 1] - times[m];
    Field carry = out.back() - (0.5 * h) * Ntraj.at(m + 1);
    out.push_back(prop(carry, -h) - (0.5 * h) * Ntraj.at(m));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double tail_model(const Trajectory& Ntraj) {
  return lp_norm(Ntraj.fields.back(), 2.0) * Ntraj.times.back();
}

Trajectory map_nodes(const Trajectory& src, VarTag tag,
                     const std::function<Field(std::size_t)>& fn) {
  Trajectory out;
  out.grid = src.grid;
  out.tag = tag;
  for (std::size_t i = 0; i < src.size(); ++i) out.push(src.times[i], fn(i));
  return out;
}

}  // namespace

void ScatteringConfig::validate() const {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("ScatteringConfig: " + msg);
  };
  if (!(T >= 1.0)) fail("T must be >= 1");
  if (!(T_max > T)) fail("T_max must exceed T");
  if (sweeps < 1) fail("sweeps must be >= 1");
  if (!(tol > 0.0)) fail("tol must be positive");
  if (dim != 2 && dim != 3) fail("dim must be 2 or 3");
  if (eps < 0.0) fail("eps must be >= 0");
  if (!(beta < 0.5)) fail("beta must be < 1/2");
  if (!(1.0 - beta < alpha && alpha < 2.0 * beta))
    fail("alpha must satisfy 1 - beta < alpha < 2 beta");
  if (!(kappa > 0.0 && kappa < 0.25)) fail("kappa must lie in (0, 1/4)");
  if (!(0.5 + kappa < alpha && alpha < 2.0 * beta - kappa))
    fail("alpha must satisfy 1/2 + kappa < alpha < 2 beta - kappa");
  if (!time_nodes.empty()) {
    if (time_nodes.front() < T - 1e-12 || time_nodes.back() > T_max + 1e-12)
      fail("time_nodes must lie in [T, T_max]");
    for (std::size_t i = 1; i < time_nodes.size(); ++i)
      if (time_nodes[i] <= time_nodes[i - 1])
        fail("time_nodes must be increasing");
  }
}

std::vector<double> geometric_nodes(double T, double T_max,
                                    std::size_t count) {
  if (count < 2 || !(T > 0.0) || !(T_max > T))
    throw std::invalid_argument("geometric_nodes: bad arguments");
  std::vector<double> out(count);
  const double lr = std::log(T_max / T) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = T * std::exp(lr * static_cast<double>(i));
  out.front() = T;
  out.back() = T_max;
  return out;
}

std::vector<double> ScatteringConfig::resolved_nodes(double target_dt) const {
  if (!time_nodes.empty()) return time_nodes;
  // Geometric spacing clusters nodes near T; the largest step sits at T_max
  // and equals about T_max log(T_max/T) / count.
  const double want = T_max * std::log(T_max / T) / target_dt;
  const auto count = static_cast<std::size_t>(
      std::max(49.0, std::ceil(want)));
  return geometric_nodes(T, T_max, count);
}

std::pair<Trajectory, Trajectory> free_profile(
    const Field& phi, const std::vector<double>& times) {
  Field p = phi.rep() == Rep::physical ? phi : to_physical(phi);
  Trajectory ztraj, utraj;
  ztraj.grid = utraj.grid = p.grid_ptr();
  ztraj.tag = VarTag::z;
  utraj.tag = VarTag::u;
  for (double t : times) {
    Field z = propagate(p, t);
    utraj.push(t, v_map(z));
    ztraj.push(t, std::move(z));
  }
  return {std::move(ztraj), std::move(utraj)};
}

Field duhamel_from_infinity(const Trajectory& Ntraj, double t, double T_max,
                            double* tail_estimate, bool drop_H) {
  if (Ntraj.times.empty() ||
      Ntraj.times.back() < T_max - 1e-9 * (1.0 + T_max))
    throw std::invalid_argument("duhamel_from_infinity: nodes end before T_max");
  const std::size_t i0 = node_index(Ntraj.times, t);
  if (tail_estimate) *tail_estimate = tail_model(Ntraj);
  auto suffix = duhamel_suffix(Ntraj, drop_H);
  return suffix[i0];
}

Trajectory duhamel_all_nodes(const Trajectory& Ntraj, double* tail_estimate,
                             bool drop_H) {
  if (tail_estimate) *tail_estimate = tail_model(Ntraj);
  auto suffix = duhamel_suffix(Ntraj, drop_H);
  return map_nodes(Ntraj, VarTag::z,
                   [&](std::size_t i) { return std::move(suffix[i]); });
}

Trajectory tri_term(const Trajectory& utraj) {
  Trajectory src = map_nodes(utraj, VarTag::z,
                             [&](std::size_t i) { return N3(utraj.at(i)); });
  return duhamel_all_nodes(src);
}

Trajectory dif_term(const Trajectory& utraj, const Trajectory& u0traj) {
  check_aligned(utraj, u0traj);
  Trajectory src = map_nodes(utraj, VarTag::z, [&](std::size_t i) {
    return N2(utraj.at(i)) - N2(u0traj.at(i));
  });
  return duhamel_all_nodes(src);
}

Trajectory asy_term(const Trajectory& u0traj) {
  Trajectory src = map_nodes(u0traj, VarTag::z,
                             [&](std::size_t i) { return N2(u0traj.at(i)); });
  return duhamel_all_nodes(src);
}

Trajectory z_prime(const Trajectory& z0traj) {
  Trajectory src = map_nodes(z0traj, VarTag::z, [&](std::size_t i) {
    Field w = abs_squared(apply_symbol(z0traj.at(i), SymbolId::U));
    for (auto& v : w.values()) v = cplx{0.0, v.real()};
    return w;
  });
  return duhamel_all_nodes(src);
}

Field nu_field(const Field& u, double* dropped_zero_mode) {
  if (u.rep() != Rep::physical)
    throw std::invalid_argument("nu_field: u must be physical");
  return apply_multiplier_drop_zero(
      abs_squared(u),
      [](double r) {
        return symbol_value(SymbolId::InvTwoMinusLap, r) *
               symbol_value(SymbolId::Uinv, r);
      },
      dropped_zero_mode);
}

namespace {

Trajectory traj_diff(const Trajectory& a, const Trajectory& b) {
  check_aligned(a, b);
  return map_nodes(a, a.tag,
                   [&](std::size_t i) { return a.at(i) - b.at(i); });
}

bool traj_finite(const Trajectory& t) {
  for (const auto& f : t.fields)
    for (const auto& v : f.values())
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace

ScatterResult iterate(const Field& phi, const ScatteringConfig& cfg) {
  cfg.validate();
  const std::vector<double> nodes = cfg.resolved_nodes();
  Field p = phi.rep() == Rep::physical ? phi : to_physical(phi);

  ScatterResult res;
  res.diag.datum_besov = besov_norm(p, 1.0, 1.0, 1.0);

  auto [z0, u0] = free_profile(p, nodes);
  std::vector<Field> N2_u0;
  N2_u0.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) N2_u0.push_back(N2(u0.at(i)));
  // base = z0 + Asy(u0), fixed across sweeps.
  Trajectory base = duhamel_all_nodes(map_nodes(u0, VarTag::z, [&](std::size_t i) {
    return Field(N2_u0[i]);
  }));
  for (std::size_t i = 0; i < nodes.size(); ++i) base.fields[i] += z0.at(i);

  Trajectory z = std::move(z0);
  Trajectory u = std::move(u0);
  ScriptZNorms sz;
  int grow_streak = 0;

  for (int k = 1; k <= cfg.sweeps; ++k) {
    Trajectory src = map_nodes(u, VarTag::z, [&](std::size_t i) {
      return N3(u.at(i)) + N2(u.at(i)) - N2_u0[i];
    });
    Trajectory corr = duhamel_all_nodes(src);
    Trajectory z_new = map_nodes(z, VarTag::z, [&](std::size_t i) {
      return base.at(i) + corr.at(i);
    });
    Trajectory u_new = map_nodes(u, VarTag::u, [&](std::size_t i) {
      Field w = apply_symbol(abs_squared(u.at(i)), SymbolId::P);
      Field out = v_map(z.at(i));
      for (std::size_t j = 0; j < out.size(); ++j)
        out[j] -= cplx{0.5 * w[j].real(), 0.0};
      return out;
    });
    res.diag.sweeps_run = k;

    if (!traj_finite(z_new) || !traj_finite(u_new)) {
      res.diag.diverged = true;
      res.diag.note = "non-finite iterate at sweep " + std::to_string(k);
      break;
    }

    sz = script_z_norms(traj_diff(z_new, z), traj_diff(u_new, u), cfg);
    const double D = sz.z2() + sz.zprime();
    const double E = script_z_norms(u_new, u_new, cfg).size();
    res.diag.D.push_back(D);
    res.diag.E.push_back(E);
    if (res.diag.D.size() > 1) {
      const double prev = res.diag.D[res.diag.D.size() - 2];
      res.diag.contraction_ratios.push_back(prev > 0.0 ? D / prev : 0.0);
      grow_streak = D > prev ? grow_streak + 1 : 0;
    }
    z = std::move(z_new);
    u = std::move(u_new);
    if (!std::isfinite(D) || E > 1e6) {
      res.diag.diverged = true;
      res.diag.note = "iterate norms blew up at sweep " + std::to_string(k);
      break;
    }
    if (D <= cfg.tol) {
      res.diag.converged = true;
      break;
    }
    if (grow_streak >= 3) {
      res.diag.diverged = true;
      res.diag.note = "difference norm grew for 3 consecutive sweeps";
      break;
    }
  }

  res.ztraj = std::move(z);
  res.utraj = std::move(u);
  return res;
}

double wl_norm(const std::vector<double>& times,
               const std::vector<double>& values, double s, double b,
               double T) {
  if (times.size() != values.size() || times.size() < 2)
    throw std::invalid_argument("wl_norm: bad sample arrays");
  if (!(T > 0.0) || b < 0.0 || b > 1.0)
    throw std::invalid_argument("wl_norm: need T > 0 and b in [0,1]");
  const double t_end = times.back();
  if (t_end <= T)
    throw std::invalid_argument("wl_norm: samples end at or before T");

  double sup = 0.0;
  for (double S = T; S < t_end * (1.0 - 1e-12); S *= 2.0) {
    const double hi = std::min(2.0 * S, t_end);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] >= S - 1e-12 && times[i] <= hi + 1e-12) idx.push_back(i);
    if (idx.size() < 8)
      throw std::invalid_argument(
          "wl_norm: fewer than 8 samples in a dyadic block");
    double block;
    if (b == 0.0) {
      block = 0.0;
      for (auto i : idx) block = std::max(block, values[i]);
    } else {
      const double pexp = 1.0 / b;
      double acc = 0.0;
      for (std::size_t j = 1; j < idx.size(); ++j) {
        const double h = times[idx[j]] - times[idx[j - 1]];
        acc += 0.5 * h * (std::pow(values[idx[j - 1]], pexp) +
                          std::pow(values[idx[j]], pexp));
      }
      block = std::pow(acc, b);
    }
    sup = std::max(sup, std::pow(S, s) * block);
  }
  return sup;
}

double wl_norm(const Trajectory& traj, double s, double b, double T,
               const SpatialNorm& spatial) {
  std::vector<double> vals;
  vals.reserve(traj.size());
  for (const auto& f : traj.fields) vals.push_back(spatial(f));
  return wl_norm(traj.times, vals, s, b, T);
}

double x_eps_norm(const Trajectory& utraj, double eps, double T) {
  if (eps < 0.0) throw std::invalid_argument("x_eps_norm: eps must be >= 0");
  const double q = 1.0 / (1.0 / 3.0 - eps);
  const double b = 10.0 * eps;
  const double s = 0.5 - 8.0 * eps;
  auto h1q = [q](const Field& f) {
    auto grad = gradient(f);
    Field mag(f.grid_ptr(), Rep::physical);
    for (std::size_t i = 0; i < f.size(); ++i) {
      double g2 = 0.0;
      for (const auto& c : grad) g2 += std::norm(c[i]);
      mag[i] = cplx{std::sqrt(g2), 0.0};
    }
    return lp_norm(f, q) + lp_norm(mag, q);
  };
  return wl_norm(utraj, s, b, T, h1q);
}

ScriptZNorms script_z_norms(const Trajectory& ztraj, const Trajectory& utraj,
                            const ScatteringConfig& cfg) {
  ScriptZNorms out;
  const double T = cfg.T;
  out.z_weighted_h1 = wl_norm(ztraj, cfg.alpha, 0.0, T, [](const Field& f) {
    return sobolev_norm(f, 1.0, true);
  });
  out.z_weighted_hhalf = wl_norm(ztraj, cfg.beta, 0.0, T, [](const Field& f) {
    return sobolev_norm(f, 0.5, true);
  });
  out.u_weighted_l4 = wl_norm(utraj, cfg.beta, 0.0, T, [](const Field& f) {
    return lp_norm(f, 4.0);
  });
  out.u_re_weighted_l2 = wl_norm(utraj, cfg.alpha, 0.0, T, [](const Field& f) {
    return lp_norm(real_field(f), 2.0);
  });
  out.u_grad_weighted_l2 =
      wl_norm(utraj, cfg.alpha, 0.0, T, [](const Field& f) {
        return sobolev_norm(f, 1.0, true);
      });
  out.u_weighted_h1 = out.u_grad_weighted_l2;
  return out;
}

double data_norm_N(const Field& phi) {
  if (phi.rep() != Rep::physical)
    throw std::invalid_argument("data_norm_N: phi must be physical");
  const Grid& g = phi.grid();
  const int d = g.dim();
  double total = sobolev_norm(phi, 1.0, false);

  // Enumerate multi-indices k with |k| <= 2 (including k = 0).
  std::vector<std::array<int, 3>> ks;
  for (int k0 = 0; k0 <= 2; ++k0)
    for (int k1 = 0; k1 <= 2 - k0; ++k1)
      for (int k2 = 0; k2 <= 2 - k0 - k1; ++k2) {
        if (d == 2 && k2 > 0) continue;
        ks.push_back({k0, k1, k2});
      }

  const double half = 0.5 * g.length();
  const double dxi = std::pow(g.freq_step(), d);
  for (const auto& k : ks) {
    const int korder = k[0] + k[1] + k[2];
    Field w(phi.grid_ptr(), Rep::physical);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      auto x = g.x(i);
      double m = 1.0;
      for (int a = 0; a < d; ++a)
        for (int rep = 0; rep < k[a]; ++rep) m *= x[a] - half;
      w[i] = m * phi[i];
    }
    Field what = to_spectral(w);
    double l2 = 0.0, linf = 0.0;
    for (std::size_t i = 0; i < what.size(); ++i) {
      const double r = g.xi_abs(i);
      const double weight =
          std::pow(r, korder) / std::sqrt(japanese(r));
      const double v = weight * std::abs(what[i]);
      l2 += v * v;
      linf = std::max(linf, v);
    }
    total += std::sqrt(l2 * dxi) + linf;
  }
  return total;
}

}  // namespace gp
