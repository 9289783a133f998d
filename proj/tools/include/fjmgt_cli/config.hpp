#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <fjmgt/experiments.hpp>
#include <fjmgt/medium.hpp>

namespace fjmgt::cli {

/// Every configurable quantity with its default. Keys in the config file match
/// the member names except L and T.
struct RunConfig {
  // grid
  double L = 1.0;
  std::size_t n_modes = 64;
  double dt = 1e-3;
  double T = 1.0;
  // medium
  double c = 1.0;
  double delta = 0.1;
  double k1 = 1.0;
  double k2 = 0.0;
  double k3 = 0.0;
  std::string family = "westervelt";  // westervelt | kuznetsov_blackstock
  std::string kernel = "abel";        // abel | delta | tabulated
  double alpha = 0.75;
  std::string kernel_file;  // two-column CSV for the tabulated kernel
  double power_a = 1.0;     // tabulated kernels only
  double tau = 0.05;
  double tau_max = 1.0;
  // data
  double amplitude = 1e-2;
  double velocity_amplitude = 0.0;
  double acceleration_amplitude = 0.0;  // u2 = value * sin(pi x / L) with u2_policy = explicit
  std::string u2_policy = "compatible";  // compatible | explicit
  // solver
  double a_lower = 0.1;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  bool simplify_memory = true;
  bool memory_source = false;
  bool memory_source_override = false;
  // experiments
  std::vector<double> tau_list = default_tau_list();
  std::string norm = "west_rate";
  std::string sweep_id = "sweep";
  unsigned threads = 1;
  std::uint64_t seed = 20240611;

  /// Directory of the config file, used to resolve a relative kernel_file.
  std::filesystem::path base_dir;
};

/// Applies one `key = value` assignment; throws ConfigError naming the key.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses flat `key = value` text (with '#' comments) or a JSON manifest whose
/// "config" object holds the keys. Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Cross-field checks; `need_tau` for commands that run the relaxed equation.
void validate(const RunConfig& cfg, bool need_tau);

/// The config as a JSON object with every key, in a form parse_config accepts.
std::string config_json(const RunConfig& cfg);

KernelSpec make_kernel(const RunConfig& cfg);
MediumParams make_medium(const RunConfig& cfg);
SolverOptions make_options(const RunConfig& cfg);
InitialData make_data(const RunConfig& cfg, const SpectralSpace& space);
NormKind make_norm(const RunConfig& cfg);
SweepConfig make_sweep(const RunConfig& cfg);

}  // namespace fjmgt::cli
