#pragma once

#include <functional>
#include <string>

#include "fjmgt/kernels.hpp"
#include "fjmgt/spectral.hpp"

namespace fjmgt {

/// Physical constants of the medium and the memory law.
struct MediumParams {
  double c = 1.0;      // sound speed
  double delta = 0.1;  // sound diffusivity
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double tau = 0.0;      // relaxation time
  double tau_cap = 1.0;  // upper bound for admissible tau
  KernelSpec kernel = KernelSpec::dirac_delta();
  Family family = Family::Westervelt;

  /// Throws InvalidArgument. `require_positive_tau` is false for limit runs.
  void validate(bool require_positive_tau) const;

  /// tau^a.
  double relaxation_weight() const;

  Nonlinearity nonlinearity() const { return {family, k1, k2, k3, c}; }
};

enum class AccelerationPolicy { Explicit, CompatibleWithLimit };

/// Modal initial position, velocity and acceleration.
struct InitialData {
  ModalVector u0;
  ModalVector u1;
  ModalVector u2;  // used when policy == Explicit
  AccelerationPolicy policy = AccelerationPolicy::CompatibleWithLimit;
};

/// Modal forcing f_j(t); an empty function means f = 0.
using Forcing = std::function<ModalVector(double)>;

struct SolverOptions {
  double a_lower = 0.1;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  /// Evaluate tau^a c^2 K * 1 * K~ * mu as (t * mu).
  bool simplify_memory = true;
  /// Add the pressure-form memory source r(t) = -tau^a K(t) (u2 - c^2 u0_xx).
  bool memory_source = false;
  /// Keep the user's u2 while the memory source is on (otherwise u2 = c^2 u0_xx).
  bool memory_source_override = false;
};

/// u0 = A (sin(pi x/L) + sin(2 pi x/L)), u1 = V sin(pi x/L), u2 compatible.
/// The profile changes sign, so large A makes 1 + 2 k1 u vanish somewhere.
InitialData sine_profile_data(const SpectralSpace& space, double amplitude,
                              double velocity_amplitude = 0.0);

std::string to_string(Family family);
std::string to_string(AccelerationPolicy policy);

}  // namespace fjmgt
