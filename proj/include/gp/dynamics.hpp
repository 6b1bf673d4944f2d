#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gp/operators.hpp"
#include "gp/trajectory.hpp"

namespace gp {

enum class Scheme { strang_rk4, etd_rk2 };

struct SolverConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::strang_rk4;
  bool dealias = true;
  std::vector<double> sample_times;
};

/// Thrown when the solution leaves the perturbative regime or goes NaN.
class NumericalAbort : public std::runtime_error {
public:
  explicit NumericalAbort(const std::string& what) : std::runtime_error(what) {}
};

/// F(u) = u^2 + 2|u|^2 + |u|^2 u, pointwise, dealiased when requested.
Field nonlinearity_F(const Field& u, bool use_dealias = true);

/// Right-hand side of the diagonalized equation,
///   dv/dt = -iHv - V^{-1}( i F(Vv) ),
/// with the U^{-1} zero mode dropped per policy. Pure function of v.
Field rhs_v(const Field& v, bool use_dealias = true);

/// Conserved functionals of the perturbation variable u (physical).
double energy(const Field& u);
double charge(const Field& u);

/// One time step in the v variable. The v field's zero-mode coefficient is
/// interpreted as the full uhat(0) (both components); its decoupled linear
/// flow u1(0) -> u1(0), u2(0) -> u2(0) - 2t u1(0) is applied exactly inside
/// the linear substeps. Test hook: disable_nonlinearity freezes F at 0.
Field step(const Field& v, double dt, Scheme scheme, bool use_dealias = true,
           bool disable_nonlinearity = false);

/// u <-> v conversions carrying the zero mode through the identity leg,
/// matching the convention used by step().
Field u_from_v_full(const Field& v);
Field v_from_u_full(const Field& u);

struct ConservationSample {
  double t, energy, charge, l2, h1dot, l4, linf;
};

struct EvolveResult {
  Trajectory vtraj;
  std::vector<ConservationSample> conservation;
};

/// Integrate from t=0 to T, sampling at config.sample_times (plus T if not
/// listed). v0 physical, in the v variable with the zero-mode convention of
/// step().
EvolveResult evolve(const Field& v0, double T, const SolverConfig& config);

}  // namespace gp
