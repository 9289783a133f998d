#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fjmgt/medium.hpp"
#include "fjmgt/spectral.hpp"
#include "fjmgt/trajectory.hpp"

namespace fjmgt {

/// Space-time norms of a trajectory difference e.
///   WestRate:        max_t |e|        + (int |e_x|^2 dt)^{1/2}
///   BlackstockRate:  max_t |e_x|      + (int |e_xx|^2 dt)^{1/2}
///   Energy:          max_t |e_t|      + max_t |e_x|
enum class NormKind { WestRate, BlackstockRate, Energy };

std::string to_string(NormKind kind);
/// Accepts "west_rate", "blackstock_rate", "energy" (case-insensitive, '-' or '_').
NormKind parse_norm_kind(const std::string& name);

/// Throws GridMismatch unless both trajectories share dt, length, mode count
/// and snapshot count.
double error_norm(const Trajectory& a, const Trajectory& b, NormKind kind,
                  const SpectralSpace& space);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log E - fitted line|
  std::size_t points_used = 0;
  std::vector<std::string> warnings;
};

/// Least squares through (log tau, log E). Pairs with E == 0 are dropped with
/// a warning; negative E throws NonpositiveError, as does having fewer than
/// three positive pairs left.
RateFit fit_rate(std::span<const double> taus, std::span<const double> errors);

/// "westervelt", "kuznetsov", "blackstock" or "kuznetsov_blackstock".
std::string family_label(const MediumParams& params);

/// Slope threshold a - 0.1 exists for Westervelt with WestRate and for
/// Blackstock (k1 = 0) with BlackstockRate; every other pairing is reported
/// without one.
std::optional<double> theorem_threshold(const MediumParams& params, NormKind kind);

struct SweepConfig {
  MediumParams medium;  // tau is taken from `taus`
  InitialData data;
  Forcing forcing;
  double length = 1.0;
  std::size_t n_modes = 64;
  double dt = 1e-3;
  double T = 1.0;
  SolverOptions options;
  std::vector<double> taus;
  NormKind norm = NormKind::WestRate;
  std::string sweep_id = "sweep";
  unsigned threads = 1;
  /// Compare the limit run against a 2 dt run to estimate discretization error.
  bool self_convergence_check = true;
};

std::vector<double> default_tau_list();  // 0.2 * 2^-k, k = 0..5

struct SweepPoint {
  double tau = 0.0;
  double error = 0.0;  // NaN when the run failed
  std::string status;  // "ok" or "failed: <reason>"
  std::string run_id;
};

struct RateReport {
  std::string sweep_id;
  NormKind norm = NormKind::WestRate;
  std::string family;
  std::string kernel;
  std::string alpha_or_delta0;  // alpha of an Abel kernel, "delta0" or "tabulated"
  double power_a = 1.0;
  double dt = 0.0;
  std::size_t n_modes = 0;
  std::vector<SweepPoint> points;  // ordered by decreasing tau
  std::optional<RateFit> fit;
  std::optional<double> threshold;  // empty: "no theorem threshold"
  bool slope_ok = false;            // fit exists and meets the threshold (if any)
  std::size_t inversions = 0;       // E increasing while tau decreases
  bool monotone = false;            // at most one inversion
  std::optional<double> self_convergence_error;
  std::vector<std::string> warnings;

  bool passed() const;
};

/// Solves the limit problem once and the fJMGT problem for every tau, forms
/// E(tau) and fits the rate. A failing tau is recorded, not rethrown. With a
/// non-empty `out_dir` writes <sweep_id>.csv and <sweep_id>.json there.
RateReport tau_sweep(const SweepConfig& config, const std::filesystem::path& out_dir = {});

/// CSV columns: tau, error, norm_kind, family, alpha_or_delta0, dt, n_modes, status.
std::string rate_report_csv(const RateReport& report);
std::string rate_report_json(const RateReport& report);

/// Compiler, standard library and platform identification.
std::string environment_fingerprint();

}  // namespace fjmgt
