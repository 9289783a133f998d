#include "fjmgt/limit_solvers.hpp"

#include <utility>

#include "fjmgt/errors.hpp"
#include "fjmgt/fjmgt_solver.hpp"

namespace fjmgt {

Trajectory solve_limit(const LimitConfig& config, const Forcing& forcing, double T, double dt,
                       const SpectralSpace& space, const SolverOptions& options) {
  MediumParams medium = config.medium;
  medium.tau = 0.0;
  medium.validate(false);
  const std::size_t n_steps = step_count(T, dt);

  InitialData data;
  data.u0 = config.u0;
  data.u1 = config.u1.empty() ? ModalVector(space.modes(), 0.0) : config.u1;
  data.policy = AccelerationPolicy::CompatibleWithLimit;
  if (data.u0.size() != space.modes() || data.u1.size() != space.modes()) {
    throw LengthMismatch("limit data does not match the mode count");
  }
  const double a0 = leading_coefficient_min(medium, space, data.u0, data.u1);
  if (!(a0 >= options.a_lower)) throw Degenerate(0.0, a0, options.a_lower);

  SolverOptions limit_options = options;
  limit_options.memory_source = false;
  data = prepare_initial_data(medium, space, std::move(data), forcing, limit_options);

  VolterraMarch march(medium, space, std::move(data), forcing, dt, n_steps, limit_options, true);
  Trajectory traj(dt, space.modes(), space.length());
  traj.reserve(n_steps + 1);
  traj.push(0.0, march.state().xi, march.state().dxi, march.state().ddxi);
  while (!march.done()) {
    march.step();
    const auto& s = march.state();
    traj.push(s.time, s.xi, s.dxi, s.ddxi);
  }
  return traj;
}

}  // namespace fjmgt
