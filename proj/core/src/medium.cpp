#include "fjmgt/medium.hpp"

#include <cmath>

#include "fjmgt/errors.hpp"

namespace fjmgt {

void MediumParams::validate(bool require_positive_tau) const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(finite(c) && c > 0.0)) throw InvalidArgument("sound speed c must be positive");
  if (!(finite(delta) && delta > 0.0)) throw InvalidArgument("diffusivity delta must be positive");
  if (!finite(k1) || !finite(k2) || !finite(k3)) {
    throw InvalidArgument("nonlinearity coefficients must be finite");
  }
  if (!(finite(tau_cap) && tau_cap > 0.0)) throw InvalidArgument("tau cap must be positive");
  if (!finite(tau) || tau < 0.0) throw InvalidArgument("tau must be non-negative");
  if (require_positive_tau && !(tau > 0.0)) throw InvalidArgument("tau must be positive");
  if (tau > tau_cap) throw InvalidArgument("tau exceeds the configured cap");
  if (family == Family::Westervelt && (k2 != 0.0 || k3 != 0.0)) {
    throw InvalidArgument("the Westervelt family only uses k1 (k2 = k3 = 0)");
  }
}

double MediumParams::relaxation_weight() const {
  if (tau == 0.0) return 0.0;
  return std::pow(tau, kernel.power_a());
}

InitialData sine_profile_data(const SpectralSpace& space, double amplitude,
                              double velocity_amplitude) {
  const std::size_t n = space.modes();
  const double scale = std::sqrt(0.5 * space.length());  // sin(j pi x / L) = scale * phi_j
  InitialData data;
  data.u0.assign(n, 0.0);
  data.u1.assign(n, 0.0);
  data.u0[0] = amplitude * scale;
  if (n > 1) data.u0[1] = amplitude * scale;
  data.u1[0] = velocity_amplitude * scale;
  data.policy = AccelerationPolicy::CompatibleWithLimit;
  return data;
}

std::string to_string(Family family) {
  return family == Family::Westervelt ? "westervelt" : "kuznetsov_blackstock";
}

std::string to_string(AccelerationPolicy policy) {
  return policy == AccelerationPolicy::Explicit ? "explicit" : "compatible";
}

}  // namespace fjmgt
