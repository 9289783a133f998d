#include "fjmgt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "fjmgt/errors.hpp"
#include "fjmgt/fjmgt_solver.hpp"
#include "fjmgt/io.hpp"
#include "fjmgt/limit_solvers.hpp"

namespace fjmgt {

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::WestRate:
      return "west_rate";
    case NormKind::BlackstockRate:
      return "blackstock_rate";
    case NormKind::Energy:
      return "energy";
  }
  return "unknown";
}

NormKind parse_norm_kind(const std::string& name) {
  std::string key;
  for (char ch : name) {
    if (ch == '-' || ch == ' ') continue;
    if (ch == '_') continue;
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (key == "westrate") return NormKind::WestRate;
  if (key == "blackstockrate") return NormKind::BlackstockRate;
  if (key == "energy") return NormKind::Energy;
  throw InvalidArgument("unknown norm kind '" + name + "'");
}

double error_norm(const Trajectory& a, const Trajectory& b, NormKind kind,
                  const SpectralSpace& space) {
  if (a.size() != b.size() || a.modes() != b.modes() || a.modes() != space.modes() ||
      a.dt() != b.dt() || a.length() != b.length()) {
    throw GridMismatch("trajectories do not share the time grid and mode count");
  }
  if (a.size() == 0) return 0.0;
  const std::size_t n = a.modes();
  ModalVector diff(n);
  double sup = 0.0;
  double sup2 = 0.0;
  double integral = 0.0;
  double prev_sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const bool velocity = kind == NormKind::Energy;
    const auto xa = velocity ? a.dxi(k) : a.xi(k);
    const auto xb = velocity ? b.dxi(k) : b.xi(k);
    for (std::size_t j = 0; j < n; ++j) diff[j] = xa[j] - xb[j];
    switch (kind) {
      case NormKind::WestRate:
      case NormKind::BlackstockRate: {
        const int order = kind == NormKind::WestRate ? 0 : 1;
        sup = std::max(sup, sobolev_norm(space, diff, order));
        const double v = sobolev_norm(space, diff, order + 1);
        const double sq = v * v;
        if (k > 0) integral += 0.5 * (sq + prev_sq) * a.dt();
        prev_sq = sq;
        break;
      }
      case NormKind::Energy: {
        sup = std::max(sup, sobolev_norm(space, diff, 0));
        ModalVector pos(n);
        for (std::size_t j = 0; j < n; ++j) pos[j] = a.xi(k)[j] - b.xi(k)[j];
        sup2 = std::max(sup2, sobolev_norm(space, pos, 1));
        break;
      }
    }
  }
  if (kind == NormKind::Energy) return sup + sup2;
  return sup + std::sqrt(integral);
}

RateFit fit_rate(std::span<const double> taus, std::span<const double> errors) {
  if (taus.size() != errors.size()) throw LengthMismatch("taus and errors differ in length");
  RateFit fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] > 0.0)) throw InvalidArgument("tau values must be positive");
    if (errors[i] < 0.0 || std::isnan(errors[i])) {
      throw NonpositiveError("negative or undefined error at tau = " + format_double(taus[i]));
    }
    if (errors[i] == 0.0) {
      fit.warnings.push_back("dropped zero error at tau = " + format_double(taus[i]));
      continue;
    }
    x.push_back(std::log(taus[i]));
    y.push_back(std::log(errors[i]));
  }
  if (x.size() < 3) {
    throw NonpositiveError("rate fit needs at least three positive errors, got " +
                           std::to_string(x.size()));
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("rate fit needs at least two distinct tau values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.residual = std::max(fit.residual, std::abs(y[i] - (fit.intercept + fit.slope * x[i])));
  }
  fit.points_used = x.size();
  return fit;
}

std::string family_label(const MediumParams& params) {
  if (params.family == Family::Westervelt) return "westervelt";
  if (params.k1 == 0.0) return "blackstock";
  if (params.k2 == 0.0) return "kuznetsov";
  return "kuznetsov_blackstock";
}

std::optional<double> theorem_threshold(const MediumParams& params, NormKind kind) {
  const double a = params.kernel.power_a();
  if (params.family == Family::Westervelt && kind == NormKind::WestRate) return a - 0.1;
  if (params.family == Family::KuznetsovBlackstock && params.k1 == 0.0 &&
      kind == NormKind::BlackstockRate) {
    return a - 0.1;
  }
  return std::nullopt;
}

std::vector<double> default_tau_list() {
  std::vector<double> taus;
  for (int k = 0; k <= 5; ++k) taus.push_back(0.2 * std::ldexp(1.0, -k));
  return taus;
}

bool RateReport::passed() const {
  if (!fit) return false;
  if (!threshold) return true;
  return slope_ok && monotone;
}

namespace {

std::string kernel_tag(const KernelSpec& kernel) {
  if (kernel.is_delta()) return "delta0";
  if (const auto* abel = kernel.as_abel()) return format_double(abel->alpha);
  return "tabulated";
}

std::string canonical_run(const SweepConfig& cfg, double tau) {
  std::string s;
  auto add = [&](double v) {
    s += format_double(v);
    s += ';';
  };
  s += cfg.medium.kernel.describe() + ";" + to_string(cfg.medium.family) + ";";
  for (double v : {cfg.medium.c, cfg.medium.delta, cfg.medium.k1, cfg.medium.k2, cfg.medium.k3,
                   tau, cfg.dt, cfg.T, cfg.length, static_cast<double>(cfg.n_modes)}) {
    add(v);
  }
  for (const auto* vec : {&cfg.data.u0, &cfg.data.u1, &cfg.data.u2}) {
    for (double v : *vec) add(v);
    s += '|';
  }
  s += to_string(cfg.data.policy);
  return s;
}

std::string failure_text(const std::exception& e) {
  if (dynamic_cast<const Degenerate*>(&e)) return std::string("failed: degenerate: ") + e.what();
  if (dynamic_cast<const PicardDiverged*>(&e)) return std::string("failed: picard: ") + e.what();
  return std::string("failed: ") + e.what();
}

}  // namespace

RateReport tau_sweep(const SweepConfig& config, const std::filesystem::path& out_dir) {
  if (config.taus.empty()) throw InvalidArgument("tau list is empty");
  std::vector<double> taus = config.taus;
  std::sort(taus.begin(), taus.end(), std::greater<>());
  if (std::adjacent_find(taus.begin(), taus.end()) != taus.end()) {
    throw InvalidArgument("tau list contains duplicates");
  }
  for (double tau : taus) {
    if (!(tau > 0.0)) throw InvalidArgument("tau values must be positive");
  }

  const SpectralSpace space(config.length, config.n_modes);
  RateReport report;
  report.sweep_id = config.sweep_id;
  report.norm = config.norm;
  report.family = family_label(config.medium);
  report.kernel = config.medium.kernel.describe();
  report.alpha_or_delta0 = kernel_tag(config.medium.kernel);
  report.power_a = config.medium.kernel.power_a();
  report.dt = config.dt;
  report.n_modes = config.n_modes;
  report.threshold = theorem_threshold(config.medium, config.norm);
  if (!report.threshold) report.warnings.push_back("no theorem threshold");

  const LimitConfig limit{config.medium, config.data.u0, config.data.u1};
  const Trajectory reference = solve_limit(limit, config.forcing, config.T, config.dt, space,
                                           config.options);

  report.points.resize(taus.size());
  auto run_one = [&](std::size_t i) {
    SweepPoint& point = report.points[i];
    point.tau = taus[i];
    point.run_id = fnv1a_hex(canonical_run(config, taus[i]));
    MediumParams medium = config.medium;
    medium.tau = taus[i];
    try {
      const Trajectory traj =
          solve(medium, config.data, config.forcing, config.T, config.dt, space, config.options);
      point.error = error_norm(traj, reference, config.norm, space);
      point.status = "ok";
    } catch (const Error& e) {
      point.error = std::numeric_limits<double>::quiet_NaN();
      point.status = failure_text(e);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads,
                                                           static_cast<unsigned>(taus.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < taus.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < taus.size(); i = next++) run_one(i);
      });
    }
  }

  std::vector<double> ok_tau, ok_err;
  for (const auto& p : report.points) {
    if (p.status == "ok") {
      ok_tau.push_back(p.tau);
      ok_err.push_back(p.error);
    } else {
      report.warnings.push_back("tau = " + format_double(p.tau) + " " + p.status);
    }
  }
  for (std::size_t i = 1; i < ok_err.size(); ++i) {
    if (ok_err[i] > ok_err[i - 1]) ++report.inversions;
  }
  report.monotone = report.inversions <= 1 && ok_err.size() == taus.size();
  try {
    report.fit = fit_rate(ok_tau, ok_err);
    for (const auto& w : report.fit->warnings) report.warnings.push_back(w);
    report.slope_ok = !report.threshold || report.fit->slope >= *report.threshold;
  } catch (const Error& e) {
    report.warnings.push_back(std::string("no rate fit: ") + e.what());
  }

  if (config.self_convergence_check) {
    const std::size_t n_steps = step_count(config.T, config.dt);
    if (n_steps % 2 == 0) {
      const Trajectory coarse = solve_limit(limit, config.forcing, config.T, 2.0 * config.dt,
                                            space, config.options);
      const Trajectory fine = reference.subsample(2);
      if (coarse.size() == fine.size()) {
        const double est = error_norm(fine, coarse, config.norm, space);
        report.self_convergence_error = est;
        if (!ok_err.empty()) {
          const double smallest = *std::min_element(ok_err.begin(), ok_err.end());
          if (smallest < 20.0 * est) {
            report.warnings.push_back("smallest E(tau) = " + format_double(smallest) +
                                      " is below 20x the self-convergence estimate " +
                                      format_double(est));
          }
        }
      }
    } else {
      report.warnings.push_back("self-convergence check skipped: odd step count");
    }
  }

  if (!out_dir.empty()) {
    atomic_write(out_dir / (config.sweep_id + ".csv"), rate_report_csv(report));
    atomic_write(out_dir / (config.sweep_id + ".json"), rate_report_json(report));
  }
  return report;
}

std::string rate_report_csv(const RateReport& report) {
  std::string out = "tau,error,norm_kind,family,alpha_or_delta0,dt,n_modes,status\n";
  for (const auto& p : report.points) {
    std::string status = p.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out += format_double(p.tau) + "," + (std::isnan(p.error) ? "nan" : format_double(p.error)) +
           "," + to_string(report.norm) + "," + report.family + "," + report.alpha_or_delta0 +
           "," + format_double(report.dt) + "," + std::to_string(report.n_modes) + "," + status +
           "\n";
  }
  return out;
}

std::string rate_report_json(const RateReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["sweep_id"] = report.sweep_id;
  j["norm_kind"] = to_string(report.norm);
  j["family"] = report.family;
  j["kernel"] = report.kernel;
  j["alpha_or_delta0"] = report.alpha_or_delta0;
  j["power_a"] = report.power_a;
  j["dt"] = report.dt;
  j["n_modes"] = report.n_modes;
  ordered_json runs = ordered_json::array();
  for (const auto& p : report.points) {
    ordered_json r;
    r["tau"] = p.tau;
    if (std::isnan(p.error)) {
      r["error"] = nullptr;
    } else {
      r["error"] = p.error;
    }
    r["status"] = p.status;
    r["run_id"] = p.run_id;
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);
  if (report.fit) {
    j["fit"] = {{"slope", report.fit->slope},
                {"intercept", report.fit->intercept},
                {"residual", report.fit->residual},
                {"points_used", report.fit->points_used}};
  } else {
    j["fit"] = nullptr;
  }
  if (report.threshold) {
    j["threshold"] = *report.threshold;
  } else {
    j["threshold"] = nullptr;
  }
  j["no_theorem_threshold"] = !report.threshold.has_value();
  j["slope_ok"] = report.slope_ok;
  j["inversions"] = report.inversions;
  j["monotone"] = report.monotone;
  if (report.self_convergence_error) {
    j["self_convergence_error"] = *report.self_convergence_error;
  } else {
    j["self_convergence_error"] = nullptr;
  }
  j["passed"] = report.passed();
  j["warnings"] = report.warnings;
  j["environment"] = ordered_json::parse(environment_fingerprint());
  return j.dump(2) + "\n";
}

std::string environment_fingerprint() {
  nlohmann::ordered_json env;
#if defined(__clang__)
  env["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = std::string("gcc ") + __VERSION__;
#else
  env["compiler"] = "unknown";
#endif
  env["cplusplus"] = static_cast<long>(__cplusplus);
#if defined(__linux__)
  env["platform"] = "linux";
#elif defined(__APPLE__)
  env["platform"] = "darwin";
#else
  env["platform"] = "other";
#endif
  env["hardware_threads"] = std::thread::hardware_concurrency();
  env["library_version"] = "0.1.0";
  return env.dump();
}

}  // namespace fjmgt
