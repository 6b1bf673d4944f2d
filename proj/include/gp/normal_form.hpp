#pragma once

#include "gp/dynamics.hpp"
#include "gp/operators.hpp"
#include "gp/trajectory.hpp"

namespace gp {

/// z = V^{-1}(u + P|u|^2/2): z2 = u2 exactly, z1 = U^{-1}(u1 + P|u|^2/2)
/// with the zero mode dropped and reported.
Field to_normal_form(const Field& u, double* dropped_zero_mode = nullptr);

struct NormalFormPair {
  Field u;
  Field z;
  bool converged = false;
  int fixed_point_iters = 0;
  std::vector<double> successive_diffs;
};

/// Invert u = Vz - P|u|^2/2 by fixed-point iteration (u2 = z2 held fixed).
/// The xi=0 mode of u1 is produced by the iteration itself, restoring the
/// information dropped from z1.
NormalFormPair from_normal_form(const Field& z, double tol = 1e-12,
                                int maxiter = 50);

/// N^2(u) = -2i u1^2 - 2 P U^{-1} div(u1 grad u2)
Field N2(const Field& u, bool use_dealias = true);
/// N^3(u) = -i |u|^2 u1 + U(|u|^2 u2)
Field N3(const Field& u, bool use_dealias = true);

/// Second summand of N^2 alone (the derivative term); its xi=0 spectral
/// coefficient is exactly zero because the divergence kills the zero mode.
Field N2_derivative_part(const Field& u, bool use_dealias = true);

/// Max over sample times >= T of the L^2 mismatch between ztraj and
///   e^{-iH(t-T)} z(T) + int_T^t e^{-iH(t-s)} [N^2(u)+N^3(u)] ds
/// (composite trapezoid, each node propagated).
double duhamel_residual(const Trajectory& ztraj, const Trajectory& utraj,
                        double T, bool use_dealias = true);

}  // namespace gp
