#include "gp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gp/fft.hpp"

namespace gp {

Field to_spectral(const Field& f) {
  if (f.rep() != Rep::physical)
    throw std::invalid_argument("to_spectral: field already spectral");
  const Grid& g = f.grid();
  Field out(f.grid_ptr(), Rep::spectral, f.values());
  fft::transform(g.dim(), g.n(), out.values().data(), -1);
  const double w = g.cell_volume();
  for (auto& v : out.values()) v *= w;
  return out;
}

Field to_physical(const Field& f) {
  if (f.rep() != Rep::spectral)
    throw std::invalid_argument("to_physical: field already physical");
  const Grid& g = f.grid();
  Field out(f.grid_ptr(), Rep::physical, f.values());
  fft::transform(g.dim(), g.n(), out.values().data(), +1);
  const double w = 1.0 / g.volume();
  for (auto& v : out.values()) v *= w;
  return out;
}

namespace {

template <class Fn>
Field apply_in_spectral(const Field& f, Fn&& fn) {
  const bool was_physical = (f.rep() == Rep::physical);
  Field s = was_physical ? to_spectral(f) : f;
  fn(s);
  return was_physical ? to_physical(s) : s;
}

}  // namespace

Field apply_multiplier(const Field& f, const RadialFn& m) {
  return apply_in_spectral(f, [&](Field& s) {
    const Grid& g = s.grid();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= m(g.xi_abs(i));
  });
}

Field apply_multiplier_cplx(const Field& f, const RadialCplxFn& m) {
  return apply_in_spectral(f, [&](Field& s) {
    const Grid& g = s.grid();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= m(g.xi_abs(i));
  });
}

Field apply_multiplier_drop_zero(const Field& f, const RadialFn& m,
                                 double* dropped_zero_mode) {
  double dropped = 0.0;
  Field out = apply_in_spectral(f, [&](Field& s) {
    const Grid& g = s.grid();
    dropped = std::abs(s[0]) / std::sqrt(g.volume());
    s[0] = cplx{0.0, 0.0};
    for (std::size_t i = 1; i < s.size(); ++i) s[i] *= m(g.xi_abs(i));
  });
  if (dropped_zero_mode) *dropped_zero_mode = dropped;
  return out;
}

Field dealias(const Field& f) {
  return apply_in_spectral(f, [&](Field& s) {
    const Grid& g = s.grid();
    const int cut = g.n() / 3;
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto ix = g.unflatten(i);
      for (int a = 0; a < g.dim(); ++a) {
        if (std::abs(g.mode(ix[static_cast<std::size_t>(a)])) > cut) {
          s[i] = cplx{0.0, 0.0};
          break;
        }
      }
    }
  });
}

std::vector<Field> gradient(const Field& f) {
  const bool was_physical = (f.rep() == Rep::physical);
  Field s = was_physical ? to_spectral(f) : f;
  const Grid& g = s.grid();
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) {
    Field comp = s;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      auto xi = g.xi(i);
      comp[i] *= cplx{0.0, xi[static_cast<std::size_t>(a)]};
    }
    out.push_back(was_physical ? to_physical(comp) : std::move(comp));
  }
  return out;
}

Field divergence(const std::vector<Field>& v) {
  if (v.empty()) throw std::invalid_argument("divergence: empty vector field");
  const Grid& g = v[0].grid();
  if (static_cast<int>(v.size()) != g.dim())
    throw std::invalid_argument("divergence: component count != dim");
  const bool was_physical = (v[0].rep() == Rep::physical);
  Field acc(v[0].grid_ptr(), Rep::spectral);
  for (int a = 0; a < g.dim(); ++a) {
    Field s = was_physical ? to_spectral(v[static_cast<std::size_t>(a)])
                           : v[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto xi = g.xi(i);
      acc[i] += cplx{0.0, xi[static_cast<std::size_t>(a)]} * s[i];
    }
  }
  return was_physical ? to_physical(acc) : acc;
}

double lp_norm(const Field& f, double p) {
  if (f.rep() != Rep::physical)
    throw std::invalid_argument("lp_norm: field must be physical");
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  const double w = f.grid().cell_volume();
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::pow(std::abs(v), p);
  return std::pow(acc * w, 1.0 / p);
}

double sobolev_norm(const Field& f, double s, bool homogeneous) {
  Field sp = (f.rep() == Rep::physical) ? to_spectral(f) : f;
  const Grid& g = sp.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const double r = g.xi_abs(i);
    double w;
    if (homogeneous) {
      if (i == 0) continue;  // zero mode always excluded in homogeneous norms
      w = std::pow(r, s);
    } else {
      w = std::pow(1.0 + r * r, 0.5 * s);
    }
    acc += w * w * std::norm(sp[i]);
  }
  return std::sqrt(acc / g.volume());
}

DyadicPartition::DyadicPartition(const Grid& grid) {
  const double r_min = grid.freq_step();
  const double r_max = grid.xi_abs(grid.flatten({grid.n() / 2, grid.n() / 2,
                                                 grid.dim() == 3 ? grid.n() / 2 : 0}));
  j_min_ = static_cast<int>(std::floor(std::log2(r_min)));
  j_max_ = static_cast<int>(std::ceil(std::log2(r_max)));
}

double DyadicPartition::chi(int j, double r) const {
  if (!(r > 0.0)) return 0.0;
  const double s = std::log2(r) - j;
  auto taper = [](double t) {
    const double c = std::cos(0.5 * std::numbers::pi * t);
    return c * c;
  };
  if (j == j_min_) {
    if (s <= 0.0) return 1.0;
    return (s < 1.0) ? taper(s) : 0.0;
  }
  if (j == j_max_) {
    if (s >= 0.0) return 1.0;
    return (s > -1.0) ? taper(s) : 0.0;
  }
  return (std::abs(s) < 1.0) ? taper(s) : 0.0;
}

Field DyadicPartition::block(const Field& f, int j) const {
  Field out = apply_multiplier(f, [this, j](double r) { return chi(j, r); });
  // zero mode is not part of any block (homogeneous decomposition)
  if (out.rep() == Rep::spectral) {
    out[0] = cplx{0.0, 0.0};
    return out;
  }
  Field s = to_spectral(out);
  s[0] = cplx{0.0, 0.0};
  return to_physical(s);
}

double besov_norm(const Field& f, double s, double p, double q) {
  DyadicPartition part(f.grid());
  return besov_norm(f, s, p, q, part);
}

double besov_norm(const Field& f, double s, double p, double q,
                  const DyadicPartition& partition) {
  Field sp = (f.rep() == Rep::spectral) ? f : to_spectral(f);
  double acc = 0.0;
  double sup = 0.0;
  for (int j = partition.j_min(); j <= partition.j_max(); ++j) {
    Field blk = partition.block(sp, j);
    const double term =
        std::pow(2.0, j * s) * lp_norm(to_physical(blk), p);
    if (std::isinf(q))
      sup = std::max(sup, term);
    else
      acc += std::pow(term, q);
  }
  return std::isinf(q) ? sup : std::pow(acc, 1.0 / q);
}

}  // namespace gp
