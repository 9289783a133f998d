#include "fjmgt_cli/cli.hpp"

#include <cmath>
#include <limits>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include <fjmgt/convolution.hpp>
#include <fjmgt/errors.hpp>
#include <fjmgt/experiments.hpp>
#include <fjmgt/fjmgt_solver.hpp>
#include <fjmgt/io.hpp>
#include <fjmgt/kernels.hpp>
#include <fjmgt/limit_solvers.hpp>

#include "fjmgt_cli/config.hpp"

namespace fjmgt::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Manifest {
  std::string command;
  std::string status = "ok";
  std::string message;
  std::vector<std::string> artifacts;
  ordered_json summary = ordered_json::object();
};

std::string run_id(const std::string& command, const RunConfig& cfg) {
  return fnv1a_hex(command + "\n" + config_json(cfg));
}

void write_manifest(const fs::path& out_dir, const RunConfig& cfg, const Manifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["run_id"] = run_id(m.command, cfg);
  j["status"] = m.status;
  if (!m.message.empty()) j["message"] = m.message;
  j["config"] = ordered_json::parse(config_json(cfg));
  const SpectralSpace space(cfg.L, cfg.n_modes);
  j["grid"] = {{"L", cfg.L},
               {"n_modes", cfg.n_modes},
               {"quadrature_points", space.points()},
               {"dt", cfg.dt},
               {"T", cfg.T},
               {"steps", step_count(cfg.T, cfg.dt)}};
  j["artifacts"] = m.artifacts;
  j["summary"] = m.summary;
  j["environment"] = ordered_json::parse(environment_fingerprint());
  atomic_write(out_dir / "manifest.json", j.dump(2) + "\n");
}

void cmd_solve(const RunConfig& cfg, const fs::path& out_dir, Manifest& m, std::ostream& out) {
  validate(cfg, true);
  const SpectralSpace space(cfg.L, cfg.n_modes);
  const Trajectory traj =
      solve(make_medium(cfg), make_data(cfg, space), {}, cfg.T, cfg.dt, space, make_options(cfg));
  atomic_write(out_dir / "trajectory.csv", trajectory_csv(traj));
  m.artifacts.push_back("trajectory.csv");
  m.summary["steps"] = traj.steps();
  m.summary["final_l2"] = sobolev_norm(space, traj.xi(traj.steps()), 0);
  out << "solve: " << traj.steps() << " steps, trajectory written to "
      << (out_dir / "trajectory.csv").string() << "\n";
}

void cmd_limit(const RunConfig& cfg, const fs::path& out_dir, Manifest& m, std::ostream& out) {
  validate(cfg, false);
  const SpectralSpace space(cfg.L, cfg.n_modes);
  const InitialData data = make_data(cfg, space);
  const Trajectory traj = solve_limit({make_medium(cfg), data.u0, data.u1}, {}, cfg.T, cfg.dt,
                                      space, make_options(cfg));
  atomic_write(out_dir / "limit_trajectory.csv", trajectory_csv(traj));
  m.artifacts.push_back("limit_trajectory.csv");
  m.summary["steps"] = traj.steps();
  m.summary["final_l2"] = sobolev_norm(space, traj.xi(traj.steps()), 0);
  out << "limit: " << traj.steps() << " steps, trajectory written to "
      << (out_dir / "limit_trajectory.csv").string() << "\n";
}

void cmd_sweep(const RunConfig& cfg, const fs::path& out_dir, Manifest& m, std::ostream& out) {
  validate(cfg, false);
  const RateReport report = tau_sweep(make_sweep(cfg), out_dir);
  m.artifacts.push_back(cfg.sweep_id + ".csv");
  m.artifacts.push_back(cfg.sweep_id + ".json");
  if (report.fit) m.summary["slope"] = report.fit->slope;
  m.summary["no_theorem_threshold"] = !report.threshold.has_value();
  m.summary["passed"] = report.passed();
  for (const auto& p : report.points) {
    out << "tau " << format_double(p.tau) << "  E " << format_double(p.error) << "  " << p.status
        << "\n";
  }
  if (report.fit) {
    out << "slope " << format_double(report.fit->slope) << "  residual "
        << format_double(report.fit->residual);
    if (report.threshold) {
      out << "  threshold " << format_double(*report.threshold)
          << (report.passed() ? "  (met)" : "  (not met)");
    } else {
      out << "  (no theorem threshold)";
    }
    out << "\n";
  }
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
}

void cmd_kernel_check(const RunConfig& cfg, const fs::path& out_dir, Manifest& m,
                      std::ostream& out) {
  validate(cfg, false);
  const KernelSpec kernel = make_kernel(cfg);
  const std::size_t n = step_count(cfg.T, cfg.dt);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i + 1) * cfg.dt;
  const AdmissibilityReport adm = kernel_admissible(kernel, grid);
  const ResolventSpec res = resolvent(kernel, cfg.dt, n);
  const double deviation = resolvent_identity_deviation(kernel, res, cfg.dt, n);
  std::vector<double> y(n + 1);
  for (std::size_t i = 0; i <= n; ++i) y[i] = static_cast<double>(i) * cfg.dt;
  const double coercivity = coercivity_functional(kernel, y, cfg.dt);

  ordered_json j;
  j["kernel"] = kernel.describe();
  j["power_a"] = kernel.power_a();
  j["resolvent"] = res.describe();
  j["admissible"] = adm.admissible;
  if (!adm.admissible) {
    j["first_violation"] = *adm.first_violation;
    j["violation_time"] = adm.violation_time;
    j["reason"] = adm.reason;
  }
  j["resolvent_identity_max_deviation"] = deviation;
  j["coercivity_y_equals_t"] = coercivity;
  j["moment0_at_T"] = kernel_moment(kernel, 0, cfg.T);
  j["moment1_at_T"] = kernel_moment(kernel, 1, cfg.T);
  atomic_write(out_dir / "kernel_check.json", j.dump(2) + "\n");
  m.artifacts.push_back("kernel_check.json");
  m.summary = j;
  out << kernel.describe() << ": admissible " << (adm.admissible ? "yes" : "no")
      << ", resolvent identity deviation " << format_double(deviation) << "\n";
}

bool cmd_selftest(const RunConfig& cfg, Manifest& m, std::ostream& out) {
  bool all = true;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    m.summary[name] = ok;
    all = all && ok;
  };
  const double dt = 1e-3;
  for (double alpha : {0.6, 0.75, 0.9}) {
    const KernelSpec k = KernelSpec::abel(alpha);
    const double dev = resolvent_identity_deviation(k, resolvent(k), dt, 1000);
    report("resolvent_identity_alpha_" + format_double(alpha), dev <= 0.01,
           "max deviation " + format_double(dev));
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const KernelSpec abel = KernelSpec::abel(0.75);
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const double a = coef(rng), b = coef(rng), c = coef(rng);
    std::vector<double> y(1001);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double t = static_cast<double>(i) * dt;
      y[i] = t * (a + t * (b + t * c));
      norm2 += y[i] * y[i] * dt;
    }
    const double value = coercivity_functional(abel, y, dt);
    worst = std::min(worst, value / std::max(norm2, 1e-300));
  }
  report("coercivity_random_cubics", worst >= -1e-8, "worst normalized value " + format_double(worst));

  std::vector<double> ramp(1001);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i) * dt;
  const double d = caputo_l1(0.75, ramp, dt).back();
  const double exact = 1.0 / std::tgamma(1.25);
  report("caputo_l1_ramp", std::abs(d - exact) <= 0.02 * exact, "value " + format_double(d));
  return all;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver and experiment harness for fractional JMGT-type acoustic equations",
               "fjmgt"};
  std::string command;
  std::string config_path;
  std::string out_dir = "out";
  std::string tau_list;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  app.add_option("command", command, "solve | limit | sweep | kernel-check | selftest")
      ->required()
      ->check(CLI::IsMember({"solve", "limit", "sweep", "kernel-check", "selftest"}));
  app.add_option("--config", config_path, "key = value config file or JSON manifest");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--tau-list", tau_list, "comma-separated tau values for sweep");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--threads", threads, "worker threads for sweeps");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!tau_list.empty()) set_key(cfg, "tau_list", tau_list);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (!cfg.kernel_file.empty() && fs::path(cfg.kernel_file).is_relative() &&
        !cfg.base_dir.empty()) {
      cfg.kernel_file = fs::absolute(cfg.base_dir / cfg.kernel_file).lexically_normal().string();
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  const fs::path dir(out_dir);
  Manifest manifest;
  manifest.command = command;
  try {
    bool ok = true;
    if (command == "solve") {
      cmd_solve(cfg, dir, manifest, out);
    } else if (command == "limit") {
      cmd_limit(cfg, dir, manifest, out);
    } else if (command == "sweep") {
      cmd_sweep(cfg, dir, manifest, out);
    } else if (command == "kernel-check") {
      cmd_kernel_check(cfg, dir, manifest, out);
    } else {
      ok = cmd_selftest(cfg, manifest, out);
      if (!ok) manifest.status = "failed";
    }
    write_manifest(dir, cfg, manifest);
    return ok ? kOk : kFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Degenerate& e) {
    manifest.status = "failed";
    manifest.message = e.what();
    manifest.summary["failure"] = "degenerate";
    manifest.summary["time"] = e.time;
    manifest.summary["grid_minimum"] = e.grid_minimum;
    write_manifest(dir, cfg, manifest);
    err << "solver error: " << e.what() << "\n";
    return kSolverError;
  } catch (const PicardDiverged& e) {
    manifest.status = "failed";
    manifest.message = e.what();
    manifest.summary["failure"] = "picard_diverged";
    manifest.summary["time"] = e.time;
    write_manifest(dir, cfg, manifest);
    err << "solver error: " << e.what() << "\n";
    return kSolverError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace fjmgt::cli
