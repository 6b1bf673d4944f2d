#pragma once

#include <complex>
#include <random>

#include "gp/field.hpp"
#include "gp/spectral.hpp"

namespace gptest {

using gp::cplx;
using gp::Field;
using gp::GridPtr;
using gp::Rep;

/// Smooth random field: uniform spectral coefficients damped by e^{-|xi|^2},
/// returned in physical representation.
inline Field random_field(const GridPtr& grid, std::uint64_t seed,
                          double amplitude = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Field s(grid, Rep::spectral);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = grid->xi_abs(i);
    const double damp = amplitude * std::exp(-r * r);
    s[i] = damp * cplx{unif(rng), unif(rng)};
  }
  return gp::to_physical(s);
}

inline Field gaussian(const GridPtr& grid, double a, double w) {
  Field f(grid, Rep::physical);
  const double half = 0.5 * grid->length();
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto x = grid->x(i);
    double r2 = 0.0;
    for (int d = 0; d < grid->dim(); ++d) {
      const double dx = x[static_cast<std::size_t>(d)] - half;
      r2 += dx * dx;
    }
    f[i] = cplx{a * std::exp(-r2 / (2.0 * w * w)), 0.0};
  }
  return f;
}

inline double rel_err(const Field& got, const Field& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got[i] - want[i]);
    den += std::norm(want[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace gptest
