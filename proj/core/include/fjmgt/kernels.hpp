#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace fjmgt {

// ---------------------------------------------------------------------------
// Memory kernels
// ---------------------------------------------------------------------------

/// The Dirac distribution at zero. Convolution with it is the identity, so it
/// is carried symbolically and never sampled.
struct DiracDelta {};

/// Abel kernel t^{-alpha} / Gamma(1 - alpha).
struct Abel {
  double alpha;
};

/// Kernel given by samples, linearly interpolated between the samples and
/// held constant outside the sampled range.
struct Tabulated {
  std::vector<double> times;   // strictly increasing, positive
  std::vector<double> values;  // same length as times
};

/// A memory kernel together with the exponent a of the relaxation weight tau^a.
class KernelSpec {
 public:
  using Variant = std::variant<DiracDelta, Abel, Tabulated>;

  static KernelSpec dirac_delta();
  /// Requires 1/2 < alpha < 1; power_a is alpha.
  static KernelSpec abel(double alpha);
  static KernelSpec tabulated(std::vector<double> times, std::vector<double> values,
                              double power_a);

  const Variant& variant() const noexcept { return variant_; }
  double power_a() const noexcept { return power_a_; }
  bool is_delta() const noexcept { return std::holds_alternative<DiracDelta>(variant_); }
  const Abel* as_abel() const noexcept { return std::get_if<Abel>(&variant_); }
  const Tabulated* as_tabulated() const noexcept { return std::get_if<Tabulated>(&variant_); }

  /// Short identifier such as "abel(alpha=0.75)" or "delta0".
  std::string describe() const;

 private:
  KernelSpec(Variant v, double a) : variant_(std::move(v)), power_a_(a) {}

  Variant variant_;
  double power_a_;
};

// ---------------------------------------------------------------------------
// Resolvent kernels (K * K~ = 1)
// ---------------------------------------------------------------------------

/// Power kernel t^{beta-1} / Gamma(beta). beta = 1 is the constant one.
struct PowerLaw {
  double beta;
};

/// Step function taking values[j] on the cell [j*dt, (j+1)*dt); the last value
/// is held beyond the stored range.
struct PiecewiseConstant {
  double dt;
  std::vector<double> values;
};

class ResolventSpec {
 public:
  using Variant = std::variant<PowerLaw, PiecewiseConstant>;

  explicit ResolventSpec(Variant v) : variant_(std::move(v)) {}

  const Variant& variant() const noexcept { return variant_; }
  const PowerLaw* as_power() const noexcept { return std::get_if<PowerLaw>(&variant_); }
  const PiecewiseConstant* as_piecewise() const noexcept {
    return std::get_if<PiecewiseConstant>(&variant_);
  }
  std::string describe() const;

 private:
  Variant variant_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Pointwise kernel value. Throws DeltaNotPointwise / NonpositiveTime.
double kernel_eval(const KernelSpec& spec, double t);

/// (K * s^k)(t). Zero at t = 0.
double kernel_moment(const KernelSpec& spec, int k, double t);

/// j-fold antiderivative of the kernel, i.e. (K * 1 * ... * 1)(t) with j ones.
double kernel_antiderivative(const KernelSpec& spec, int j, double t);

double resolvent_eval(const ResolventSpec& spec, double t);
double resolvent_moment(const ResolventSpec& spec, int k, double t);
double resolvent_antiderivative(const ResolventSpec& spec, int j, double t);

/// Resolvent of the kernel. Closed form for the delta and Abel kernels; for
/// tabulated kernels the second-kind Volterra equation K * K~ = 1 is marched
/// on the grid (dt, n_steps), which must then be given.
ResolventSpec resolvent(const KernelSpec& spec, double dt = 0.0, std::size_t n_steps = 0);

/// max_{1<=n<=n_steps} |(K * K~)(t_n) - 1| on the uniform grid t_n = n dt.
///
/// For closed-form resolvents the convolution integral at t_n is split at
/// t_n / 2; each half integrates the factor that is singular there exactly
/// (through its antiderivatives) against the linear interpolant of the other
/// factor on `subcells` sub-intervals per time step. For a marched
/// (piecewise-constant) resolvent the discrete product-integration sum is used.
double resolvent_identity_deviation(const KernelSpec& kernel, const ResolventSpec& res, double dt,
                                    std::size_t n_steps, int subcells = 4);

/// Discrete approximation of int_0^T (K * y')(t) y(t) dt for samples y_0..y_N
/// on a uniform grid: L1 slopes convolved with product-integration weights,
/// outer integral by the right-endpoint rule.
double coercivity_functional(const KernelSpec& spec, std::span<const double> y, double dt);

struct AdmissibilityReport {
  bool admissible = true;
  std::optional<std::size_t> first_violation;  // index into the grid
  double violation_time = 0.0;
  double violation_value = 0.0;
  std::string reason;
};

/// Sampled check of K >= 0 and K nonincreasing.
AdmissibilityReport kernel_admissible(const KernelSpec& spec, std::span<const double> grid);

/// Two-column CSV (time, value), optional header, comma separated.
KernelSpec load_tabulated_csv(const std::filesystem::path& path, double power_a);

}  // namespace fjmgt
