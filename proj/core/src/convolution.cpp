#include "fjmgt/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fjmgt/errors.hpp"

namespace fjmgt {

namespace {

void check_request(double dt, std::size_t n_steps, std::size_t cap) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (n_steps == 0) throw InvalidArgument("n_steps must be at least 1");
  if (n_steps > cap) {
    throw WeightOverflow("requested " + std::to_string(n_steps) + " weights, cap is " +
                         std::to_string(cap));
  }
}

std::string id_with_integrations(const std::string& base, int integrations) {
  if (integrations == 0) return base;
  std::ostringstream os;
  os << "1^" << integrations << "*" << base;
  return os.str();
}

// dt^beta / Gamma(beta+1) * ((m+1)^beta - m^beta), evaluated without
// cancellation for large m.
std::vector<double> power_weights(double beta, double dt, std::size_t n_steps) {
  std::vector<double> w(n_steps + 1);
  const double scale = std::pow(dt, beta) / std::tgamma(beta + 1.0);
  w[0] = scale;
  for (std::size_t m = 1; m <= n_steps; ++m) {
    const double md = static_cast<double>(m);
    w[m] = scale * std::pow(md, beta) * std::expm1(beta * std::log1p(1.0 / md));
  }
  return w;
}

// Weights from the (integrations+1)-th antiderivative A: w_m = A((m+1)dt) - A(m dt).
template <class Antiderivative>
std::vector<double> antiderivative_weights(Antiderivative prim, double dt, std::size_t n_steps) {
  std::vector<double> w(n_steps + 1);
  double lo = 0.0;
  for (std::size_t m = 0; m <= n_steps; ++m) {
    const double hi = prim(static_cast<double>(m + 1) * dt);
    w[m] = hi - lo;
    lo = hi;
  }
  return w;
}

// Cell integrals of the j-fold antiderivative of a step function living on the
// same grid. Inside a cell the antiderivatives are polynomials, so a Taylor
// expansion from the left cell edge is exact.
std::vector<double> step_function_weights(const PiecewiseConstant& pc, int integrations,
                                          std::size_t n_steps) {
  const double dt = pc.dt;
  const auto order = static_cast<std::size_t>(integrations);
  std::vector<double> edge(order + 1, 0.0);  // edge[i]: i-fold antiderivative at cell start
  std::vector<double> w(n_steps + 1);
  std::vector<double> pow_dt(order + 3, 1.0);
  std::vector<double> fact(order + 3, 1.0);
  for (std::size_t i = 1; i < pow_dt.size(); ++i) {
    pow_dt[i] = pow_dt[i - 1] * dt;
    fact[i] = fact[i - 1] * static_cast<double>(i);
  }
  for (std::size_t m = 0; m <= n_steps; ++m) {
    edge[0] = pc.values[std::min(m, pc.values.size() - 1)];
    // integral over the cell of the `order`-fold antiderivative
    double cell = 0.0;
    for (std::size_t i = 0; i <= order; ++i) cell += edge[order - i] * pow_dt[i + 1] / fact[i + 1];
    w[m] = cell;
    std::vector<double> next(order + 1, 0.0);
    for (std::size_t q = 1; q <= order; ++q) {
      for (std::size_t i = 0; i <= q; ++i) next[q] += edge[q - i] * pow_dt[i] / fact[i];
    }
    for (std::size_t q = 1; q <= order; ++q) edge[q] = next[q];
  }
  return w;
}

}  // namespace

QuadratureWeights pi_weights(const PowerLaw& kernel, double dt, std::size_t n_steps,
                             std::size_t cap) {
  check_request(dt, n_steps, cap);
  if (!(kernel.beta > 0.0)) throw InvalidArgument("power-law exponent must be positive");
  std::ostringstream id;
  id << "power(beta=" << kernel.beta << ")";
  return {dt, power_weights(kernel.beta, dt, n_steps), id.str()};
}

QuadratureWeights pi_weights(const KernelSpec& kernel, double dt, std::size_t n_steps,
                             int integrations, std::size_t cap) {
  check_request(dt, n_steps, cap);
  if (integrations < 0) throw InvalidArgument("integrations must be non-negative");
  const std::string id = id_with_integrations(kernel.describe(), integrations);
  if (kernel.is_delta()) {
    if (integrations == 0) {
      std::vector<double> w(n_steps + 1, 0.0);
      w[0] = 1.0;
      return {dt, std::move(w), id};
    }
    return {dt, power_weights(static_cast<double>(integrations), dt, n_steps), id};
  }
  if (const auto* abel = kernel.as_abel()) {
    return {dt, power_weights(1.0 - abel->alpha + integrations, dt, n_steps), id};
  }
  auto prim = [&](double t) { return kernel_antiderivative(kernel, integrations + 1, t); };
  return {dt, antiderivative_weights(prim, dt, n_steps), id};
}

QuadratureWeights pi_weights(const ResolventSpec& kernel, double dt, std::size_t n_steps,
                             int integrations, std::size_t cap) {
  check_request(dt, n_steps, cap);
  if (integrations < 0) throw InvalidArgument("integrations must be non-negative");
  const std::string id = id_with_integrations(kernel.describe(), integrations);
  if (const auto* p = kernel.as_power()) {
    return {dt, power_weights(p->beta + integrations, dt, n_steps), id};
  }
  const auto& pc = *kernel.as_piecewise();
  if (std::abs(pc.dt - dt) <= 1e-12 * dt && !pc.values.empty()) {
    return {dt, step_function_weights(pc, integrations, n_steps), id};
  }
  auto prim = [&](double t) { return resolvent_antiderivative(kernel, integrations + 1, t); };
  return {dt, antiderivative_weights(prim, dt, n_steps), id};
}

void HistoryBuffer::append(std::span<const double> row) {
  if (row.size() != channels_) {
    throw LengthMismatch("history row has " + std::to_string(row.size()) + " entries, expected " +
                         std::to_string(channels_));
  }
  data_.insert(data_.end(), row.begin(), row.end());
}

void history_sum(const QuadratureWeights& w, const HistoryBuffer& hist, std::span<double> out) {
  const std::size_t n = hist.size();
  if (w.size() < n + 1) {
    throw LengthMismatch("weights cover " + std::to_string(w.size()) + " lags, history needs " +
                         std::to_string(n + 1));
  }
  if (out.size() != hist.channels()) throw LengthMismatch("output size differs from channels");
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t channels = hist.channels();
  for (std::size_t m = 1; m <= n; ++m) {
    const double wm = w.lag_weights[m];
    if (wm == 0.0) continue;
    const double* row = hist.row(n - m).data();
    for (std::size_t c = 0; c < channels; ++c) out[c] += wm * row[c];
  }
}

void conv_apply(const QuadratureWeights& w, const HistoryBuffer& hist,
                std::span<const double> current, std::span<double> out) {
  if (current.size() != hist.channels()) throw LengthMismatch("current sample size mismatch");
  history_sum(w, hist, out);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] += w.lag_weights[0] * current[c];
}

double conv_apply(const QuadratureWeights& w, const HistoryBuffer& hist, double current) {
  if (hist.channels() != 1) throw LengthMismatch("scalar conv_apply needs a single channel");
  double out = 0.0;
  conv_apply(w, hist, std::span<const double>(&current, 1), std::span<double>(&out, 1));
  return out;
}

std::vector<double> caputo_l1(double alpha, std::span<const double> samples, double dt) {
  if (samples.size() < 2) throw InvalidArgument("caputo_l1 needs at least two samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("Caputo order must lie in (0, 1)");
  const std::size_t n_steps = samples.size() - 1;
  const auto w = pi_weights(PowerLaw{1.0 - alpha}, dt, n_steps);
  std::vector<double> slope(n_steps);
  for (std::size_t j = 1; j <= n_steps; ++j) slope[j - 1] = (samples[j] - samples[j - 1]) / dt;
  std::vector<double> out(samples.size(), 0.0);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) acc += w.lag_weights[n - j] * slope[j - 1];
    out[n] = acc;
  }
  return out;
}

}  // namespace fjmgt
