#pragma once

#include <functional>
#include <string>
#include <utility>

#include "gp/dynamics.hpp"
#include "gp/normal_form.hpp"
#include "gp/trajectory.hpp"

namespace gp {

/// Parameters of the final-state construction on [T, T_max], plus the
/// exponent triple (alpha, beta, kappa) used by the diagnostic norms.
struct ScatteringConfig {
  double T = 10.0;
  double T_max = 80.0;
  std::vector<double> time_nodes;  // geometric default when empty
  int sweeps = 12;
  double tol = 1e-8;
  double alpha = 0.85;
  double beta = 0.48;
  double kappa = 0.05;
  int dim = 2;
  double eps = 0.1;

  /// Throws std::invalid_argument unless T >= 1 < T_max/T, beta < 1/2,
  /// 1 - beta < alpha < 2 beta, kappa in (0,1/4), and
  /// 1/2 + kappa < alpha < 2 beta - kappa.
  void validate() const;

  /// time_nodes if set, otherwise geometric_nodes with spacing <= target_dt
  /// near T_max (at least 49 nodes).
  std::vector<double> resolved_nodes(double target_dt = 0.25) const;
};

/// count nodes from T to T_max with constant ratio (log-uniform).
std::vector<double> geometric_nodes(double T, double T_max, std::size_t count);

/// z0(t) = e^{-iHt} phi and u0 = V z0, sampled at the given times.
std::pair<Trajectory, Trajectory> free_profile(const Field& phi,
                                               const std::vector<double>& times);

/// -int_t^{T_max} e^{-iH(t-s)} N(s) ds by composite trapezoid over the nodes
/// of Ntraj at/after t (t must be a node). The neglected tail beyond T_max is
/// estimated as ||N(T_max)||_{L^2} * T_max (an s^{-2} source model) and
/// reported through tail_estimate. drop_H is a test hook replacing e^{-iHs}
/// by the identity.
Field duhamel_from_infinity(const Trajectory& Ntraj, double t, double T_max,
                            double* tail_estimate = nullptr,
                            bool drop_H = false);

/// duhamel_from_infinity at every node at once, by the backward recursion
///   I(t_m) = e^{-iH(t_m - t_{m+1})}[I(t_{m+1}) - (h/2) N_{m+1}] - (h/2) N_m,
/// total cost O(#nodes).
Trajectory duhamel_all_nodes(const Trajectory& Ntraj,
                             double* tail_estimate = nullptr,
                             bool drop_H = false);

/// The three Duhamel increments of the iteration:
///   Tri(u)       from N^3(u),
///   Dif(u, u0)   from N^2(u) - N^2(u0),
///   Asy(u0)      from N^2(u0).
Trajectory tri_term(const Trajectory& utraj);
Trajectory dif_term(const Trajectory& utraj, const Trajectory& u0traj);
Trajectory asy_term(const Trajectory& u0traj);

/// z'(t) = int_inf^t i e^{-iH(t-s)} |U z0(s)|^2 ds, truncated at the last
/// node of z0traj.
Trajectory z_prime(const Trajectory& z0traj);

/// nu = (2 - Lap)^{-1} U^{-1} |u|^2; the xi = 0 coefficient is set to zero
/// (the symbol is singular there) and its dropped magnitude reported.
Field nu_field(const Field& u, double* dropped_zero_mode = nullptr);

struct IterationDiagnostics {
  std::vector<double> D;                  // per-sweep difference norms
  std::vector<double> E;                  // per-sweep size norms
  std::vector<double> contraction_ratios; // D[k] / D[k-1]
  bool converged = false;
  bool diverged = false;
  int sweeps_run = 0;
  double datum_besov = 0.0;  // ||phi||_{B^1_{1,1}} of the input
  std::string note;
};

struct ScatterResult {
  Trajectory ztraj;
  Trajectory utraj;
  IterationDiagnostics diag;
};

/// Fixed-point sweeps (Jacobi-style, both updates read the previous sweep):
///   z_new = z0 + Tri(u) + Dif(u, u0) + Asy(u0)   (Asy and z0 cached),
///   u_new(t) = V z(t) - P |u(t)|^2 / 2.
/// Stops when D <= tol, the sweep budget runs out, or D grows for 3
/// consecutive sweeps (reported as diverged, never thrown).
ScatterResult iterate(const Field& phi, const ScatteringConfig& cfg);

/// sup over dyadic S in {T, 2T, ...} of S^s ||values||_{L^{1/b}_t(S, 2S)},
/// trapezoid in time; b = 0 is the sup over the block. Every dyadic block
/// that meets the sampled range must contain >= 8 nodes.
double wl_norm(const std::vector<double>& times,
               const std::vector<double>& values, double s, double b,
               double T);

using SpatialNorm = std::function<double(const Field&)>;

/// wl_norm of t -> spatial(traj(t)).
double wl_norm(const Trajectory& traj, double s, double b, double T,
               const SpatialNorm& spatial);

/// sup_S S^{1/2 - 8 eps} ||u||_{L^p_t(S,2S; H^1_q)} with 1/p = 10 eps,
/// 1/q = 1/3 - eps (eps = 0: p = inf, q = 3).
double x_eps_norm(const Trajectory& utraj, double eps, double T);

/// Constituents of the weighted space-time norms used by the iteration
/// diagnostics (all with b = 0, i.e. sup in time over dyadic blocks).
struct ScriptZNorms {
  double z_weighted_h1 = 0.0;      // S^alpha sup ||z||_{H^1-dot}
  double z_weighted_hhalf = 0.0;   // S^beta  sup ||z||_{H^1/2-dot}
  double u_weighted_l4 = 0.0;      // S^beta  sup ||u||_{L^4}
  double u_re_weighted_l2 = 0.0;   // S^alpha sup ||Re u||_{L^2}
  double u_grad_weighted_l2 = 0.0; // S^alpha sup ||grad u||_{L^2}
  double u_weighted_h1 = 0.0;      // S^alpha sup ||u||_{H^1-dot}

  double z2() const { return z_weighted_h1 + z_weighted_hhalf; }
  double zprime() const {
    return u_weighted_l4 + u_re_weighted_l2 + u_grad_weighted_l2;
  }
  double size() const { return zprime() + u_weighted_h1; }
};

ScriptZNorms script_z_norms(const Trajectory& ztraj, const Trajectory& utraj,
                            const ScatteringConfig& cfg);

/// ||phi||_{H^1} plus, for every multi-index |k| <= 2, the L^2 + L^inf size
/// in xi of <xi>^{-1/2} |xi|^{|k|} (d/dxi)^k phi-hat, the xi derivatives
/// realized by multiplying phi by centered x^k before transforming.
double data_norm_N(const Field& phi);

}  // namespace gp
