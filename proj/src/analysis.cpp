#include "gp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gp/operators.hpp"

namespace gp {

DecayFit decay_fit(const std::vector<double>& times,
                   const std::vector<double>& values) {
  if (times.size() != values.size() || times.size() < 8)
    throw std::invalid_argument("decay_fit: need >= 8 aligned samples");
  const auto n = static_cast<double>(times.size());
  std::vector<double> xs(times.size()), ys(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !(values[i] > 0.0))
      throw std::invalid_argument("decay_fit: samples must be positive");
    xs[i] = std::log(times[i]);
    ys[i] = std::log(values[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 1e-30 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
  fit.t_lo = times.front();
  fit.t_hi = times.back();
  return fit;
}

DecayFit linear_decay_experiment(const Field& phi, double q,
                                 const std::vector<double>& times) {
  std::vector<double> values;
  values.reserve(times.size());
  for (double t : times) {
    Field f = propagate(phi, t);
    if (f.rep() != Rep::physical) f = to_physical(f);
    values.push_back(lp_norm(f, q));
  }
  return decay_fit(times, values);
}

namespace {

struct PairGeom {
  double X, s, d, mu, lambda;
};

PairGeom geom(const Vec3& xi, const Vec3& eta) {
  PairGeom g;
  g.X = norm(xi);
  g.s = norm(eta);
  g.d = norm(eta - xi);
  g.mu = g.s - g.d;
  g.lambda = g.s + g.d - g.X;
  return g;
}

}  // namespace

bool in_region(RegionId region, double delta, const Vec3& xi,
               const Vec3& eta) {
  if (!(delta > 0.0 && delta <= 0.1))
    throw std::invalid_argument("in_region: delta must lie in (0, 0.1]");
  const PairGeom g = geom(xi, eta);
  if (!(g.X > 0.0)) throw std::invalid_argument("in_region: xi must be nonzero");
  const double jX = japanese(g.X);
  const double dt_top = 2.0 * g.X * g.X * g.X / (delta * jX);
  switch (region) {
    case RegionId::Dplus:
      return g.mu > (1.0 - 2.0 * delta) * g.X;
    case RegionId::Dzero:
      return std::abs(g.mu) < (1.0 - delta) * g.X;
    case RegionId::Dminus:
      return -g.mu > (1.0 - 2.0 * delta) * g.X;
    case RegionId::DF:
      return g.lambda >= g.X / delta;
    case RegionId::DTplus:
      return g.lambda <= dt_top && g.mu > (1.0 - 2.0 * delta) * g.X;
    case RegionId::DTzero:
      return g.lambda <= dt_top &&
             g.lambda >= delta * g.X * g.X * g.X / (jX * jX) &&
             std::abs(g.mu) < (1.0 - delta) * g.X;
    case RegionId::DX:
      return g.lambda >= g.X * g.X * g.X / (delta * jX) &&
             g.lambda <= 2.0 * g.X / delta;
  }
  throw std::logic_error("in_region: unknown region");
}

namespace {

// Rebuild eta in the plane from (|xi|, |eta|, |eta - xi|); valid whenever
// |mu| <= |xi| and lambda >= 0 (the triangle inequalities).
Vec3 eta_from_sides(double X, double s, double d, double sign) {
  double c = (s * s + X * X - d * d) / (2.0 * s * X);
  c = std::clamp(c, -1.0, 1.0);
  const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
  return {s * c, sign * s * sn, 0.0};
}

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  double unif(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  double logu(double lo, double hi) {
    return std::exp(unif(std::log(lo), std::log(hi)));
  }
  double sign() { return unif(0.0, 1.0) < 0.5 ? -1.0 : 1.0; }
};

}  // namespace

ScanResult phase_lower_bound_scan(PhaseKind kind, RegionId region,
                                  std::size_t n_samples, double delta,
                                  std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 0.1))
    throw std::invalid_argument("phase_lower_bound_scan: delta in (0, 0.1]");
  const bool ok =
      (kind == PhaseKind::Phi0 &&
       (region == RegionId::Dplus || region == RegionId::Dzero)) ||
      (kind == PhaseKind::PhiPlus &&
       (region == RegionId::DF || region == RegionId::DTplus ||
        region == RegionId::DTzero || region == RegionId::DX));
  if (!ok)
    throw std::invalid_argument(
        "phase_lower_bound_scan: unsupported (kind, region) pair");

  Sampler smp(seed);
  ScanResult res;
  res.min_ratio = std::numeric_limits<double>::infinity();

  std::size_t accepted = 0, attempts = 0;
  const std::size_t max_attempts = 200 * n_samples + 1000;
  while (accepted < n_samples) {
    if (++attempts > max_attempts)
      throw std::runtime_error(
          "phase_lower_bound_scan: region empty for drawn parameters");
    double X, lambda, mu;
    switch (region) {
      case RegionId::Dplus:
        X = smp.logu(1e-3, 1e3);
        mu = smp.unif((1.0 - 2.0 * delta) * X, X);
        lambda = smp.logu(1e-9, std::min(1e3, 2e3 - X));
        break;
      case RegionId::Dzero:
        X = smp.logu(1e-3, 1e3);
        mu = smp.unif(-(1.0 - delta) * X, (1.0 - delta) * X);
        lambda = smp.logu(1e-9, std::min(1e3, 2e3 - X));
        break;
      case RegionId::DF:
        // lambda >= X/delta together with |eta| <= 1e3 caps |xi|.
        X = smp.logu(1e-3, delta * 1e3);
        mu = smp.unif(0.0, X);  // |eta| >= |eta - xi| wlog (Phi+ symmetric)
        lambda = smp.logu(X / delta, 1e3);
        break;
      case RegionId::DTplus: {
        X = smp.logu(1e-3, 1e3);
        const double top = 2.0 * X * X * X / (delta * japanese(X));
        mu = smp.unif((1.0 - 2.0 * delta) * X, X);
        lambda = smp.logu(1e-9 * top, top);
        break;
      }
      case RegionId::DTzero: {
        X = smp.logu(1e-3, 1e3);
        const double jX = japanese(X);
        mu = smp.unif(0.0, (1.0 - delta) * X);
        lambda = smp.logu(delta * X * X * X / (jX * jX),
                          2.0 * X * X * X / (delta * jX));
        break;
      }
      case RegionId::DX: {
        // The annulus between D_T and D_F closes up around |xi| ~ 2.2.
        X = smp.logu(1e-3, 2.0);
        const double lo = X * X * X / (delta * japanese(X));
        const double hi = 2.0 * X / delta;
        if (!(lo < hi)) continue;
        mu = smp.unif(-X, X);
        lambda = smp.logu(lo, hi);
        break;
      }
      default:
        throw std::logic_error("phase_lower_bound_scan: bad region");
    }
    const double s = 0.5 * (lambda + X + mu);
    const double d = 0.5 * (lambda + X - mu);
    if (!(s > 1e-7) || !(d > 1e-7)) continue;  // phase guard is 1e-8
    const Vec3 xi{X, 0.0, 0.0};
    const Vec3 eta = eta_from_sides(X, s, d, smp.sign());

    double num, comp;
    switch (region) {
      case RegionId::Dplus:
        num = phase_radial_deriv(PhaseKind::Phi0, xi, eta, 1);
        comp = s * X / japanese(s);
        break;
      case RegionId::Dzero:
        num = norm(phase_gradient(PhaseKind::Phi0, xi, eta));
        comp = japanese(s) * X / s;
        break;
      case RegionId::DF:
        num = -phase_radial_deriv(PhaseKind::PhiPlus, xi, eta, 1);
        comp = japanese(s);
        break;
      case RegionId::DTplus:
      case RegionId::DTzero:
        num = -phase_radial_deriv(PhaseKind::PhiPlus, xi, eta, 1);
        comp = X * X / japanese(X);
        break;
      case RegionId::DX: {
        const Vec3 zeta = eta - 0.5 * xi;
        const double zn = norm(zeta);
        if (zn < 1e-12 || std::abs(zeta[0]) > 0.5 * zn) continue;
        num = norm(phase_gradient(PhaseKind::PhiPlus, xi, eta));
        comp = japanese(X) * zn / X;
        break;
      }
      default:
        throw std::logic_error("phase_lower_bound_scan: bad region");
    }
    ++accepted;
    const double ratio = num / comp;
    if (ratio < res.min_ratio) {
      res.min_ratio = ratio;
      res.argmin_xi = xi;
      res.argmin_eta = eta;
    }
  }
  res.samples = accepted;
  return res;
}

ScanResult phi_plus_time_bound_scan(std::size_t n_samples, double delta,
                                    std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 0.1))
    throw std::invalid_argument("phi_plus_time_bound_scan: delta in (0, 0.1]");
  Sampler smp(seed);
  ScanResult res;
  res.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_samples; ++i) {
    double X, lambda, mu, sgn;
    if (i % 2 == 0) {
      // lambda well above the stationary shell: -Phi+ ~ sqrt(2) lambda.
      X = smp.logu(1e-3, 1.0);
      lambda = smp.logu(10.0 * X * X * X / japanese(X), 2.0 * X / delta);
      mu = smp.unif(-X, X);
      sgn = -1.0;
    } else {
      // lambda well below it, away from D_+- : Phi+ > 0.
      X = smp.logu(1e-3, 1e3);
      const double jX2 = japanese(X) * japanese(X);
      // the loss H'(|xi|) lambda must stay below the convexity gain, which
      // shrinks like delta |xi|^3 near the |mu| boundary
      lambda = smp.logu(1e-6 * X * X * X / jX2,
                        0.1 * delta * X * X * X / jX2);
      mu = smp.unif(-(1.0 - delta) * X, (1.0 - delta) * X);
      sgn = 1.0;
    }
    const double s = 0.5 * (lambda + X + mu);
    const double d = 0.5 * (lambda + X - mu);
    if (!(s > 1e-7) || !(d > 1e-7)) continue;  // phase guard is 1e-8
    const Vec3 xi{X, 0.0, 0.0};
    const Vec3 eta = eta_from_sides(X, s, d, smp.sign());
    const double val = sgn * phase_value(PhaseKind::PhiPlus, xi, eta);
    const double ratio = val * japanese(X) / (X * X * X);
    if (ratio < res.min_ratio) {
      res.min_ratio = ratio;
      res.argmin_xi = xi;
      res.argmin_eta = eta;
    }
    ++res.samples;
  }
  return res;
}

namespace {

std::vector<double> simpson_weights(int nodes, double h) {
  if (nodes < 3 || nodes % 2 == 0)
    throw std::invalid_argument("bilinear integral: time_nodes must be odd >= 3");
  std::vector<double> w(static_cast<std::size_t>(nodes), h / 3.0);
  for (int j = 1; j + 1 < nodes; ++j)
    w[static_cast<std::size_t>(j)] *= (j % 2 == 1) ? 4.0 : 2.0;
  return w;
}

double term_multiplier(BilinearTerm term, double se, double de) {
  const double ua = symbol_value(SymbolId::U, se);
  return term == BilinearTerm::u1sq ? ua * symbol_value(SymbolId::U, de) : ua;
}

}  // namespace

cplx bilinear_integral_direct(const RadialFn& fhat, const RadialFn& ghat,
                              PhaseKind kind, const Vec3& xi, double t_lo,
                              double t_hi, const Grid& eta_grid,
                              BilinearTerm term, int time_nodes,
                              bool drop_phase) {
  if (!(t_hi > t_lo))
    throw std::invalid_argument("bilinear_integral_direct: need t_hi > t_lo");
  const double ds = (t_hi - t_lo) / (time_nodes - 1);
  const auto w = simpson_weights(time_nodes, ds);

  if (!drop_phase) {
    double max_phi = 0.0, max_grad = 0.0;
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
      const auto ev = eta_grid.xi(i);
      const Vec3 eta{ev[0], ev[1], ev[2]};
      max_phi = std::max(max_phi, std::abs(phase_value(kind, xi, eta)));
      if (norm(eta) > 1e-8 && norm(eta - xi) > 1e-8)
        max_grad = std::max(max_grad, norm(phase_gradient(kind, xi, eta)));
    }
    if (max_phi * ds > 0.5)
      throw std::invalid_argument(
          "bilinear_integral_direct: time step does not resolve the phase");
    if (max_grad * eta_grid.freq_step() > 0.5)
      throw std::invalid_argument(
          "bilinear_integral_direct: eta grid does not resolve the phase");
  }

  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    const auto ev = eta_grid.xi(i);
    const Vec3 eta{ev[0], ev[1], ev[2]};
    const double se = norm(eta), de = norm(eta - xi);
    const double amp = term_multiplier(term, se, de) * fhat(se) * ghat(de);
    if (amp == 0.0) continue;
    const double phase = drop_phase ? 0.0 : phase_value(kind, xi, eta);
    cplx inner{0.0, 0.0};
    for (int j = 0; j < time_nodes; ++j) {
      const double s = t_lo + ds * j;
      inner += w[static_cast<std::size_t>(j)] * std::polar(1.0, phase * s);
    }
    acc += amp * inner;
  }
  return acc / eta_grid.volume();
}

cplx bilinear_integral_spectral(const Field& phi, const Field& psi,
                                BilinearTerm term, PhaseKind kind,
                                const std::array<int, 3>& xi_mode, double t_lo,
                                double t_hi, int time_nodes) {
  if (!(t_hi > t_lo))
    throw std::invalid_argument("bilinear_integral_spectral: need t_hi > t_lo");
  const Grid& g = phi.grid();
  const double ds = (t_hi - t_lo) / (time_nodes - 1);
  const auto w = simpson_weights(time_nodes, ds);

  std::array<int, 3> ix{0, 0, 0};
  Vec3 xiv{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) {
    const int m = xi_mode[static_cast<std::size_t>(a)];
    if (m < -g.n() / 2 || m >= g.n() / 2)
      throw std::invalid_argument("bilinear_integral_spectral: mode range");
    ix[static_cast<std::size_t>(a)] = m >= 0 ? m : m + g.n();
    xiv[static_cast<std::size_t>(a)] = g.freq_step() * m;
  }
  const std::size_t flat = g.flatten(ix);
  const double Hxi = dispersion(norm(xiv));

  Field phs = phi.rep() == Rep::spectral ? phi : to_spectral(phi);
  Field pss = psi.rep() == Rep::spectral ? psi : to_spectral(psi);
  Field legA = apply_symbol(phs, SymbolId::U);
  Field legB = term == BilinearTerm::u1sq ? apply_symbol(pss, SymbolId::U)
                                          : std::move(pss);
  const bool conjA = kind != PhaseKind::PhiPlus;
  const bool conjB = kind == PhaseKind::PhiMinus;

  cplx acc{0.0, 0.0};
  for (int j = 0; j < time_nodes; ++j) {
    const double s = t_lo + ds * j;
    Field A = to_physical(propagate(legA, s));
    Field B = to_physical(propagate(legB, s));
    if (conjA)
      for (auto& v : A.values()) v = std::conj(v);
    if (conjB)
      for (auto& v : B.values()) v = std::conj(v);
    Field P(A.grid_ptr(), Rep::physical);
    for (std::size_t i = 0; i < P.size(); ++i) P[i] = A[i] * B[i];
    const cplx coeff = to_spectral(P)[flat];
    acc += w[static_cast<std::size_t>(j)] * std::polar(1.0, Hxi * s) * coeff;
  }
  return acc;
}

}  // namespace gp
