#pragma once

#include <cstdint>

#include "gp/phase.hpp"
#include "gp/spectral.hpp"
#include "gp/trajectory.hpp"

namespace gp {

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log-log intercept
  double r_squared = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// Least squares of log(value) against log(t); needs >= 8 strictly positive
/// samples at positive times.
DecayFit decay_fit(const std::vector<double>& times,
                   const std::vector<double>& values);

/// Fit of t -> ||e^{-iHt} phi||_{L^q} over the given times (q = inf allowed).
DecayFit linear_decay_experiment(const Field& phi, double q,
                                 const std::vector<double>& times);

/// Frequency regions of the bilinear phase analysis, parametrized by the
/// small overlap width delta. With mu = |eta| - |eta - xi| and
/// lambda = |eta| + |eta - xi| - |xi|:
///   Dplus : mu > (1 - 2 delta) |xi|
///   Dzero : |mu| < (1 - delta) |xi|
///   Dminus: -mu > (1 - 2 delta) |xi|
///   DF    : lambda >= |xi| / delta
///   DTplus: lambda <= 2 |xi|^3 / (delta <xi>) and Dplus
///   DTzero: delta |xi|^3 / <xi>^2 <= lambda <= 2 |xi|^3 / (delta <xi>)
///           and Dzero
///   DX    : |xi|^3 / (delta <xi>) <= lambda <= 2 |xi| / delta
enum class RegionId { Dplus, Dzero, Dminus, DF, DTplus, DTzero, DX };

bool in_region(RegionId region, double delta, const Vec3& xi, const Vec3& eta);

struct ScanResult {
  double min_ratio = 0.0;
  Vec3 argmin_xi{0.0, 0.0, 0.0};
  Vec3 argmin_eta{0.0, 0.0, 0.0};
  std::size_t samples = 0;
};

/// Minimum over region samples of (phase derivative) / (claimed comparator):
///   (Phi0,    Dplus ): d_r Phi0            vs  |eta||xi| / <eta>
///   (Phi0,    Dzero ): |grad Phi0|         vs  <eta>|xi| / |eta|
///   (PhiPlus, DF    ): -d_r Phi+           vs  <eta>           (|eta| = max)
///   (PhiPlus, DTplus): -d_r Phi+           vs  |xi|^2 / <xi>
///   (PhiPlus, DTzero): -d_r Phi+           vs  |xi|^2 / <xi>   (|eta| = max)
///   (PhiPlus, DX    ): |grad Phi+|         vs  <xi>|zeta| / |xi|,
///                      restricted to |zeta-hat . xi-hat| <= 1/2
/// with zeta = eta - xi/2. Samples are log-uniform in |xi| and in lambda,
/// uniform in mu, each restricted to the region (and to |xi| ranges where
/// the region meets |eta| <= 1e3). Other (kind, region) pairs throw.
ScanResult phase_lower_bound_scan(PhaseKind kind, RegionId region,
                                  std::size_t n_samples, double delta,
                                  std::uint64_t seed = 12345);

/// Minimum of |Phi+| <xi> / |xi|^3 over the two non-oscillatory-in-eta cases:
///   lambda >= 10 |xi|^3 / <xi> (with |xi| <= 1), where -Phi+ > 0,
///   lambda <= 0.1 |xi|^3 / <xi>^2 with |mu| <= (1 - delta)|xi|, Phi+ > 0.
ScanResult phi_plus_time_bound_scan(std::size_t n_samples, double delta,
                                    std::uint64_t seed = 12345);

/// Which quadratic source the bilinear multiplier models:
///   u1sq : U applied to both legs (the |eta||eta-xi| [eta]^-1 [eta-xi]^-1
///          multiplier of the u1^2 source)
///   cross: U applied to the first leg only.
enum class BilinearTerm { u1sq, cross };

/// Brute-force tensor quadrature of
///   int_{t_lo}^{t_hi} (1/L^d) sum_eta e^{i Phi(xi,eta) s} F(xi,eta)
///                              fhat(|eta|) ghat(|xi-eta|) ds
/// over the lattice frequencies of eta_grid (Simpson in s, time_nodes odd).
/// Throws unless the resolution conditions max|Phi| ds <= 0.5 and
/// max|grad Phi| (2 pi / L) <= 0.5 hold. drop_phase is a test hook
/// replacing Phi by 0.
cplx bilinear_integral_direct(const RadialFn& fhat, const RadialFn& ghat,
                              PhaseKind kind, const Vec3& xi, double t_lo,
                              double t_hi, const Grid& eta_grid,
                              BilinearTerm term, int time_nodes = 65,
                              bool drop_phase = false);

/// The same quantity by the production path: propagate each leg, conjugate
/// the legs carrying a +H branch (Phi0: first leg, PhiMinus: both), multiply
/// pointwise in physical space, transform, undo the output propagation, and
/// Simpson-sum over the same time nodes. phi and psi are spectral-profile
/// fields; xi_mode gives the signed output mode per axis. Matches
/// bilinear_integral_direct when the profiles are real and even and decay
/// below roundoff before the aliasing shell.
cplx bilinear_integral_spectral(const Field& phi, const Field& psi,
                                BilinearTerm term, PhaseKind kind,
                                const std::array<int, 3>& xi_mode, double t_lo,
                                double t_hi, int time_nodes = 65);

}  // namespace gp
