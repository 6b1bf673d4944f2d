#pragma once

#include <functional>

#include "gp/field.hpp"

namespace gp {

// Transform normalization: the forward transform carries the quadrature
// weight h^dim, so spectral coefficients approximate the continuum Fourier
// transform  fhat(xi) = integral f(x) exp(-i x.xi) dx.  The inverse carries
// 1/L^dim.  Under this convention the discrete Parseval identity
//   sum |f|^2 h^d  =  sum |fhat|^2 / L^d
// is exact, and spatial norms below use these weights throughout.

Field to_spectral(const Field& f);
Field to_physical(const Field& f);

/// Radial symbol m(|xi|) evaluated at r = |xi| >= 0.
using RadialFn = std::function<double(double)>;
using RadialCplxFn = std::function<cplx(double)>;

/// Pointwise spectral multiplication by m(|xi|); representation preserved.
Field apply_multiplier(const Field& f, const RadialFn& m);
Field apply_multiplier_cplx(const Field& f, const RadialCplxFn& m);

/// Variant for symbols singular at xi = 0: the zero-mode output coefficient
/// is set to 0 and the L^2 weight of the dropped input zero mode is reported.
Field apply_multiplier_drop_zero(const Field& f, const RadialFn& m,
                                 double* dropped_zero_mode = nullptr);

/// 2/3-rule dealiasing: zero every coefficient whose signed axis mode
/// exceeds n/3 in absolute value. Representation preserved.
Field dealias(const Field& f);

/// Spectral gradient: components (i xi_a) fhat. Representation preserved.
std::vector<Field> gradient(const Field& f);
/// Spectral divergence of a dim-component vector field.
Field divergence(const std::vector<Field>& v);

double lp_norm(const Field& f, double p);
double sobolev_norm(const Field& f, double s, bool homogeneous);

/// Smooth dyadic Littlewood-Paley partition on the grid's nonzero
/// frequencies. Interior blocks are cos^2 tapers supported in
/// [2^{j-1}, 2^{j+1}]; the end blocks absorb everything below/above the
/// resolved range so the blocks sum to exactly 1 on the lattice.
class DyadicPartition {
public:
  explicit DyadicPartition(const Grid& grid);
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  double chi(int j, double r) const;
  Field block(const Field& f, int j) const;

private:
  int j_min_;
  int j_max_;
};

double besov_norm(const Field& f, double s, double p, double q);
double besov_norm(const Field& f, double s, double p, double q,
                  const DyadicPartition& partition);

}  // namespace gp
