#pragma once

#include "fjmgt/medium.hpp"
#include "fjmgt/spectral.hpp"
#include "fjmgt/trajectory.hpp"

namespace fjmgt {

/// Data of the tau = 0 problem: the medium (tau ignored) and (u0, u1).
/// Kuznetsov (k2 = 0) and Blackstock (k1 = 0) are Kuznetsov-Blackstock settings.
struct LimitConfig {
  MediumParams medium;
  ModalVector u0;
  ModalVector u1;
};

/// Integrates a u_tt - c^2 b u_xx - delta u_xxt + N = f with the fJMGT march
/// at tau^a = 0. The kernel of `medium` only selects the reconstruction of
/// xi'' from mu, so the result shares discretization error with fJMGT runs on
/// the same kernel and grid. u2 is always the compatible acceleration.
Trajectory solve_limit(const LimitConfig& config, const Forcing& forcing, double T, double dt,
                       const SpectralSpace& space, const SolverOptions& options = {});

}  // namespace fjmgt
