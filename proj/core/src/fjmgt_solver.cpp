#include "fjmgt/fjmgt_solver.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fjmgt/errors.hpp"

namespace fjmgt {

namespace {

double l2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

ModalVector eval_forcing(const Forcing& forcing, double t, std::size_t n) {
  if (!forcing) return ModalVector(n, 0.0);
  ModalVector f = forcing(t);
  if (f.size() != n) throw LengthMismatch("forcing returned the wrong number of modes");
  return f;
}

void require_size(const ModalVector& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw LengthMismatch(std::string("initial ") + name + " has " + std::to_string(v.size()) +
                         " modes, expected " + std::to_string(n));
  }
}

FieldGrids make_fields(const SpectralSpace& space, const Nonlinearity& nl, const ModalVector& xi,
                       const ModalVector& dxi, const ModalVector& ddxi) {
  FieldGrids g;
  if (nl.family == Family::Westervelt) {
    if (nl.k1 == 0.0) return g;
    g.u = space.synthesize(xi);
    g.ut = space.synthesize(dxi);
    g.utt = space.synthesize(ddxi);
    return g;
  }
  if (nl.is_linear()) return g;
  g.ut = space.synthesize(dxi);
  if (nl.k1 != 0.0) g.utt = space.synthesize(ddxi);
  if (nl.k2 != 0.0) g.uxx = space.synthesize(space.laplacian(xi));
  if (nl.k3 != 0.0) {
    g.ux = space.synthesize_dx(xi);
    g.uxt = space.synthesize_dx(dxi);
  }
  return g;
}

}  // namespace

std::size_t step_count(double T, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("final time T must be positive");
  const double ratio = T / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    return static_cast<std::size_t>(std::max(1.0, nearest));
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

InitialData prepare_initial_data(const MediumParams& params, const SpectralSpace& space,
                                 InitialData data, const Forcing& forcing,
                                 const SolverOptions& options) {
  const std::size_t n = space.modes();
  require_size(data.u0, n, "u0");
  if (data.u1.empty()) data.u1.assign(n, 0.0);
  require_size(data.u1, n, "u1");
  const auto& lambda = space.eigenvalues();
  const double c2 = params.c * params.c;

  if (options.memory_source && !options.memory_source_override) {
    data.u2.resize(n);
    for (std::size_t j = 0; j < n; ++j) data.u2[j] = -c2 * lambda[j] * data.u0[j];
    data.policy = AccelerationPolicy::Explicit;
    return data;
  }
  if (data.policy == AccelerationPolicy::Explicit) {
    require_size(data.u2, n, "u2");
    return data;
  }

  // Galerkin form of the limit equation at t = 0, solved for u2.
  const ModalVector f0 = eval_forcing(forcing, 0.0, n);
  ModalVector base(n);
  for (std::size_t j = 0; j < n; ++j) {
    base[j] = f0[j] - params.delta * lambda[j] * data.u1[j] - c2 * lambda[j] * data.u0[j];
  }
  const Nonlinearity nl = params.nonlinearity();
  ModalVector u2 = base;
  if (!nl.is_linear()) {
    double increment = 0.0;
    int it = 0;
    for (;; ++it) {
      if (it >= options.picard_max_iter) throw PicardDiverged(0.0, it, increment);
      const ModalVector g = nonlinear_galerkin(space, nl, make_fields(space, nl, data.u0, data.u1, u2));
      ModalVector next(n);
      double diff = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        next[j] = base[j] - g[j];
        diff += (next[j] - u2[j]) * (next[j] - u2[j]);
      }
      increment = std::sqrt(diff);
      const double size = l2(u2);
      u2 = std::move(next);
      if (!std::isfinite(increment)) throw PicardDiverged(0.0, it + 1, increment);
      if (increment <= options.picard_tol * (1.0 + size)) break;
    }
  }
  data.u2 = std::move(u2);
  return data;
}

ModalVector assemble_rhs_tilde(const MediumParams& params, const SpectralSpace& space,
                               const InitialData& data, const Forcing& forcing, double t) {
  const std::size_t n = space.modes();
  require_size(data.u0, n, "u0");
  require_size(data.u1, n, "u1");
  require_size(data.u2, n, "u2");
  const auto& lambda = space.eigenvalues();
  const double c2 = params.c * params.c;
  const double relax = params.relaxation_weight();
  const double m0 = t > 0.0 ? kernel_moment(params.kernel, 0, t) : 0.0;
  const double m1 = t > 0.0 ? kernel_moment(params.kernel, 1, t) : 0.0;
  ModalVector out = eval_forcing(forcing, t, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x0 = data.u0[j], x1 = data.u1[j], x2 = data.u2[j];
    out[j] -= x2;
    out[j] -= c2 * lambda[j] * (0.5 * x2 * t * t + x1 * t + x0);
    out[j] -= relax * c2 * lambda[j] * (x2 * m1 + x1 * m0);
    out[j] -= params.delta * lambda[j] * (x2 * t + x1);
  }
  return out;
}

double leading_coefficient_min(const MediumParams& params, const SpectralSpace& space,
                               std::span<const double> xi, std::span<const double> dxi) {
  if (params.k1 == 0.0) return 1.0;
  const auto field = params.family == Family::Westervelt ? space.synthesize(xi)
                                                         : space.synthesize(dxi);
  double lo = 1.0;  // boundary values, where u = u_t = 0
  for (double v : field) lo = std::min(lo, 1.0 + 2.0 * params.k1 * v);
  return lo;
}

void degeneracy_check(const ModalState& state, const MediumParams& params,
                      const SpectralSpace& space, double a_lower) {
  const double lo = leading_coefficient_min(params, space, state.xi, state.dxi);
  if (!(lo >= a_lower)) throw Degenerate(state.time, lo, a_lower);
}

VolterraMarch::VolterraMarch(const MediumParams& params, const SpectralSpace& space,
                             InitialData prepared, Forcing forcing, double dt,
                             std::size_t n_steps, const SolverOptions& options, bool limit)
    : params_(params),
      space_(space),
      data_(std::move(prepared)),
      forcing_(std::move(forcing)),
      options_(options),
      dt_(dt),
      n_steps_(n_steps) {
  const std::size_t n = space.modes();
  require_size(data_.u0, n, "u0");
  require_size(data_.u1, n, "u1");
  require_size(data_.u2, n, "u2");
  if (limit) params_.tau = 0.0;
  relax_ = params_.relaxation_weight();
  memory_source_ = options.memory_source && relax_ > 0.0 && !params_.kernel.is_delta();

  const ResolventSpec res = resolvent(params_.kernel, dt, n_steps);
  w_res_ = pi_weights(res, dt, n_steps, 0);
  w_res1_ = pi_weights(res, dt, n_steps, 1);
  w_res2_ = pi_weights(res, dt, n_steps, 2);
  if (options.simplify_memory) {
    w_mem_ = pi_weights(PowerLaw{2.0}, dt, n_steps);
  } else {
    w_mem_ = pi_weights(params_.kernel, dt, n_steps, 0);
  }
  h_res_.assign(n, 0.0);
  h_res1_.assign(n, 0.0);
  h_res2_.assign(n, 0.0);
  h_mem_.assign(n, 0.0);

  state_.xi = data_.u0;
  state_.dxi = data_.u1;
  state_.ddxi = data_.u2;
  state_.mu.assign(n, 0.0);
  state_.mu_history = HistoryBuffer(n);
  state_.mu_history.reserve(n_steps);
  if (!options.simplify_memory) {
    state_.nu_history = HistoryBuffer(n);
    state_.nu_history.reserve(n_steps);
  }
  degeneracy_check(state_, params_, space_, options_.a_lower);
}

void VolterraMarch::recover(std::span<const double> mu, double t, ModalVector& xi,
                            ModalVector& dxi, ModalVector& ddxi) const {
  const std::size_t n = space_.modes();
  xi.resize(n);
  dxi.resize(n);
  ddxi.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x0 = data_.u0[j], x1 = data_.u1[j], x2 = data_.u2[j];
    ddxi[j] = x2 + w_res_[0] * mu[j] + h_res_[j];
    dxi[j] = x2 * t + x1 + w_res1_[0] * mu[j] + h_res1_[j];
    xi[j] = 0.5 * x2 * t * t + x1 * t + x0 + w_res2_[0] * mu[j] + h_res2_[j];
  }
}

FieldGrids VolterraMarch::fields(const ModalVector& xi, const ModalVector& dxi,
                                 const ModalVector& ddxi) const {
  return make_fields(space_, params_.nonlinearity(), xi, dxi, ddxi);
}

StepReport VolterraMarch::step() {
  if (done()) throw InvalidArgument("march already reached its final step");
  const std::size_t n = space_.modes();
  const std::size_t k = state_.step + 1;
  const double t = static_cast<double>(k) * dt_;
  const auto& lambda = space_.eigenvalues();
  const double c2 = params_.c * params_.c;
  const double delta = params_.delta;

  history_sum(w_res_, state_.mu_history, h_res_);
  history_sum(w_res1_, state_.mu_history, h_res1_);
  history_sum(w_res2_, state_.mu_history, h_res2_);
  double mem0 = 0.0;
  if (relax_ > 0.0) {
    if (options_.simplify_memory) {
      history_sum(w_mem_, state_.mu_history, h_mem_);
      mem0 = w_mem_[0];
    } else {
      // K * nu with nu_k = w1_0 mu_k + H1_k
      history_sum(w_mem_, state_.nu_history, h_mem_);
      for (std::size_t j = 0; j < n; ++j) h_mem_[j] += w_mem_[0] * h_res1_[j];
      mem0 = w_mem_[0] * w_res1_[0];
    }
  }

  ModalVector rhs = assemble_rhs_tilde(params_, space_, data_, forcing_, t);
  if (memory_source_) {
    const double kt = kernel_eval(params_.kernel, t);
    for (std::size_t j = 0; j < n; ++j) {
      rhs[j] -= relax_ * kt * (data_.u2[j] + c2 * lambda[j] * data_.u0[j]);
    }
  }

  ModalVector known(n), diag(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lj = lambda[j];
    known[j] = rhs[j] - h_res_[j] - delta * lj * h_res1_[j] - c2 * lj * h_res2_[j] -
               relax_ * c2 * lj * h_mem_[j];
    diag[j] = relax_ + w_res_[0] + delta * lj * w_res1_[0] + c2 * lj * w_res2_[0] +
              relax_ * c2 * lj * mem0;
  }

  StepReport report;
  ModalVector mu(n);
  ModalVector xi, dxi, ddxi;
  const Nonlinearity nl = params_.nonlinearity();
  if (nl.is_linear()) {
    for (std::size_t j = 0; j < n; ++j) mu[j] = known[j] / diag[j];
    report.picard_iterations = 1;
  } else {
    mu = state_.mu;
    ModalVector next(n);
    for (int it = 0;; ++it) {
      if (it >= options_.picard_max_iter) throw PicardDiverged(t, it, report.last_increment);
      recover(mu, t, xi, dxi, ddxi);
      const ModalVector g = nonlinear_galerkin(space_, nl, fields(xi, dxi, ddxi));
      double diff = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        next[j] = (known[j] - g[j]) / diag[j];
        diff += (next[j] - mu[j]) * (next[j] - mu[j]);
      }
      report.last_increment = std::sqrt(diff);
      report.picard_iterations = it + 1;
      const double size = l2(mu);
      std::swap(mu, next);
      if (!std::isfinite(report.last_increment)) {
        throw PicardDiverged(t, it + 1, report.last_increment);
      }
      if (report.last_increment <= options_.picard_tol * (1.0 + size)) break;
    }
  }
  recover(mu, t, xi, dxi, ddxi);

  state_.mu_history.append(mu);
  if (!options_.simplify_memory) {
    ModalVector nu(n);
    for (std::size_t j = 0; j < n; ++j) nu[j] = w_res1_[0] * mu[j] + h_res1_[j];
    state_.nu_history.append(nu);
  }
  state_.mu = std::move(mu);
  state_.xi = std::move(xi);
  state_.dxi = std::move(dxi);
  state_.ddxi = std::move(ddxi);
  state_.step = k;
  state_.time = t;
  degeneracy_check(state_, params_, space_, options_.a_lower);
  return report;
}

ModalVector VolterraMarch::recovered_acceleration() const {
  const std::size_t n = space_.modes();
  const std::size_t steps = state_.mu_history.size();
  ModalVector out(data_.u2);
  for (std::size_t i = 1; i <= steps; ++i) {
    const auto row = state_.mu_history.row(i - 1);
    const double w = w_res_[steps - i];
    for (std::size_t j = 0; j < n; ++j) out[j] += w * row[j];
  }
  return out;
}

Trajectory solve(const MediumParams& params, const InitialData& data, const Forcing& forcing,
                 double T, double dt, const SpectralSpace& space, const SolverOptions& options) {
  params.validate(true);
  const std::size_t n_steps = step_count(T, dt);
  InitialData start = data;
  if (start.u1.empty()) start.u1.assign(space.modes(), 0.0);
  require_size(start.u0, space.modes(), "u0");
  require_size(start.u1, space.modes(), "u1");
  // checked before u2 is formed: the fixed point for u2 may not exist otherwise
  const double a0 = leading_coefficient_min(params, space, start.u0, start.u1);
  if (!(a0 >= options.a_lower)) throw Degenerate(0.0, a0, options.a_lower);
  InitialData prepared = prepare_initial_data(params, space, std::move(start), forcing, options);
  VolterraMarch march(params, space, std::move(prepared), forcing, dt, n_steps, options);
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
