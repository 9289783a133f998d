#pragma once

#include <cstddef>
#include <optional>

#include "fjmgt/convolution.hpp"
#include "fjmgt/medium.hpp"
#include "fjmgt/spectral.hpp"
#include "fjmgt/trajectory.hpp"

namespace fjmgt {

/// Number of steps covering [0, T]: T/dt rounded when it is an integer up to
/// rounding noise, otherwise rounded up.
std::size_t step_count(double T, double dt);

/// Fills in u2 according to the data policy and the memory-source rule, and
/// checks vector sizes. With CompatibleWithLimit, u2 solves the Galerkin form of
/// a u2 = c^2 b u0_xx + delta u1_xx - N + f(0) by fixed-point iteration.
InitialData prepare_initial_data(const MediumParams& params, const SpectralSpace& space,
                                 InitialData data, const Forcing& forcing,
                                 const SolverOptions& options = {});

/// Modal right-hand side of the mu-equation at time t for prepared data:
///   f - xi2 - c^2 lambda (xi2 t^2/2 + xi1 t + xi0)
///     - tau^a c^2 lambda (K * (xi2 s + xi1))(t) - delta lambda (xi2 t + xi1).
/// Nonlinear coefficient contributions are left to the Picard loop.
ModalVector assemble_rhs_tilde(const MediumParams& params, const SpectralSpace& space,
                               const InitialData& data, const Forcing& forcing, double t);

/// Minimum over the grid of the leading coefficient a (1 + 2 k1 u or 1 + 2 k1 u_t).
double leading_coefficient_min(const MediumParams& params, const SpectralSpace& space,
                               std::span<const double> xi, std::span<const double> dxi);

/// Current modal values and the mu history of a march.
struct ModalState {
  std::size_t step = 0;
  double time = 0.0;
  ModalVector xi;
  ModalVector dxi;
  ModalVector ddxi;
  ModalVector mu;       // last accepted mu
  HistoryBuffer mu_history;
  HistoryBuffer nu_history;  // 1 * K~ * mu, kept for the unsimplified memory term
};

/// Throws Degenerate if the leading coefficient drops below `a_lower`.
void degeneracy_check(const ModalState& state, const MediumParams& params,
                      const SpectralSpace& space, double a_lower);

struct StepReport {
  int picard_iterations = 0;
  double last_increment = 0.0;
};

/// Product-integration march of the second-kind Volterra equation for
/// mu = K * xi''' (one equation per mode):
///
///   tau^a mu + K~*mu + delta lambda 1*K~*mu + c^2 lambda 1*1*K~*mu
///     + tau^a c^2 lambda (t * mu) + NL = rhs_tilde
///
/// With `limit` set the relaxation terms are dropped, which gives the tau = 0
/// equation on the same reconstruction.
class VolterraMarch {
 public:
  VolterraMarch(const MediumParams& params, const SpectralSpace& space, InitialData prepared,
                Forcing forcing, double dt, std::size_t n_steps, const SolverOptions& options,
                bool limit = false);

  const ModalState& state() const noexcept { return state_; }
  std::size_t total_steps() const noexcept { return n_steps_; }
  bool done() const noexcept { return state_.step >= n_steps_; }

  StepReport step();

  /// xi'' at the current step re-derived from the whole mu history.
  ModalVector recovered_acceleration() const;

 private:
  void recover(std::span<const double> mu, double t, ModalVector& xi, ModalVector& dxi,
               ModalVector& ddxi) const;
  FieldGrids fields(const ModalVector& xi, const ModalVector& dxi, const ModalVector& ddxi) const;

  MediumParams params_;
  const SpectralSpace& space_;
  InitialData data_;
  Forcing forcing_;
  SolverOptions options_;
  double dt_;
  std::size_t n_steps_;
  double relax_;  // tau^a, zero in limit mode
  bool memory_source_;
  QuadratureWeights w_res_;   // K~
  QuadratureWeights w_res1_;  // 1 * K~
  QuadratureWeights w_res2_;  // 1 * 1 * K~
  QuadratureWeights w_mem_;   // t (simplified) or K (unsimplified)
  ModalVector h_res_, h_res1_, h_res2_, h_mem_;
  ModalState state_;
};

/// Runs the march to T and records every step.
Trajectory solve(const MediumParams& params, const InitialData& data, const Forcing& forcing,
                 double T, double dt, const SpectralSpace& space,
                 const SolverOptions& options = {});

}  // namespace fjmgt
