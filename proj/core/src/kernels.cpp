#include "fjmgt/kernels.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fjmgt/convolution.hpp"
#include "fjmgt/errors.hpp"

namespace fjmgt {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// (t^{beta-1}/Gamma(beta)) * s^k  ->  k! t^{k+beta} / Gamma(k+beta+1)
double power_moment(double beta, int k, double t) {
  if (t <= 0.0) return 0.0;
  return factorial(k) * std::pow(t, k + beta) / std::tgamma(k + beta + 1.0);
}

// 4-point Gauss-Legendre on [-1, 1]; exact for polynomials of degree <= 7.
constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563,
                                               0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461,
                                                 0.6521451548625461, 0.3478548451374538};

double tabulated_value(const Tabulated& tab, double r) {
  const auto& ts = tab.times;
  const auto& vs = tab.values;
  if (r <= ts.front()) return vs.front();
  if (r >= ts.back()) return vs.back();
  auto it = std::upper_bound(ts.begin(), ts.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin());
  const double w = (r - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return vs[i - 1] + w * (vs[i] - vs[i - 1]);
}

// int_0^t K(r) (t - r)^k dr with K piecewise linear: exact piecewise Gauss.
double tabulated_moment(const Tabulated& tab, int k, double t) {
  if (t <= 0.0) return 0.0;
  if (k > 6) throw InvalidArgument("tabulated kernel moments are supported for k <= 6");
  std::vector<double> breaks{0.0};
  for (double s : tab.times) {
    if (s >= t) break;
    breaks.push_back(s);
  }
  breaks.push_back(t);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    if (b <= a) continue;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double piece = 0.0;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
      const double r = mid + half * kGaussNodes[q];
      piece += kGaussWeights[q] * tabulated_value(tab, r) * std::pow(t - r, k);
    }
    total += half * piece;
  }
  return total;
}

double piecewise_value(const PiecewiseConstant& pc, double t) {
  if (pc.values.empty()) return 0.0;
  auto cell = static_cast<std::size_t>(std::floor(t / pc.dt));
  cell = std::min(cell, pc.values.size() - 1);
  return pc.values[cell];
}

// int_0^t r(s) (t - s)^k ds for a step function r.
double piecewise_moment(const PiecewiseConstant& pc, int k, double t) {
  if (t <= 0.0 || pc.values.empty()) return 0.0;
  const std::size_t n = pc.values.size();
  double total = 0.0;
  for (std::size_t j = 0;; ++j) {
    const double a = static_cast<double>(j) * pc.dt;
    if (a >= t) break;
    const double b = (j + 1 == n) ? t : std::min(t, static_cast<double>(j + 1) * pc.dt);
    const double v = pc.values[std::min(j, n - 1)];
    total += v * (std::pow(t - a, k + 1) - std::pow(t - b, k + 1)) / (k + 1);
    if (b >= t) break;
  }
  return total;
}

ResolventSpec march_resolvent(const KernelSpec& spec, double dt, std::size_t n_steps) {
  if (dt <= 0.0 || n_steps == 0) {
    throw ResolventUnsolvable("tabulated resolvent requires a time grid (dt > 0, n_steps >= 1)");
  }
  std::vector<double> w(n_steps);
  double prev = 0.0;
  for (std::size_t m = 0; m < n_steps; ++m) {
    const double next = kernel_antiderivative(spec, 1, static_cast<double>(m + 1) * dt);
    w[m] = next - prev;
    prev = next;
  }
  if (std::abs(w[0]) < 1e-14 * dt || !std::isfinite(w[0])) {
    throw ResolventUnsolvable("lag-0 kernel weight is numerically zero (" + std::to_string(w[0]) +
                              ")");
  }
  // sum_{j=1}^{n} v_j w_{n-j} = 1, v_j the value on cell j.
  std::vector<double> v(n_steps);
  for (std::size_t n = 0; n < n_steps; ++n) {
    double acc = 1.0;
    for (std::size_t j = 0; j < n; ++j) acc -= v[j] * w[n - j];
    v[n] = acc / w[0];
    if (!std::isfinite(v[n])) {
      throw ResolventUnsolvable("resolvent march produced a non-finite value at step " +
                                std::to_string(n + 1));
    }
  }
  return ResolventSpec(PiecewiseConstant{dt, std::move(v)});
}

// Split product integration of int_0^{t} a(s) b(t - s) ds; `a` is treated as
// singular near s = 0 and `b` near t - s = 0.
template <class EvalA, class PrimA, class EvalB, class PrimB>
double split_convolution(double t, std::size_t cells_per_half, EvalA eval_a, PrimA prim_a,
                         EvalB eval_b, PrimB prim_b) {
  const double h = 0.5 * t / static_cast<double>(cells_per_half);
  auto half = [&](auto eval_smooth, auto prim_sing) {
    double total = 0.0;
    double a1_lo = 0.0;
    double a2_lo = 0.0;
    double f_lo = eval_smooth(t);
    for (std::size_t c = 0; c < cells_per_half; ++c) {
      const double lo = static_cast<double>(c) * h;
      const double hi = static_cast<double>(c + 1) * h;
      const double a1_hi = prim_sing(1, hi);
      const double a2_hi = prim_sing(2, hi);
      const double f_hi = eval_smooth(t - hi);
      const double m0 = a1_hi - a1_lo;
      const double m1 = (hi - lo) * a1_hi - (a2_hi - a2_lo);
      total += f_lo * m0 + (f_hi - f_lo) / (hi - lo) * m1;
      a1_lo = a1_hi;
      a2_lo = a2_hi;
      f_lo = f_hi;
    }
    return total;
  };
  return half(eval_b, prim_a) + half(eval_a, prim_b);
}

}  // namespace

// ---------------------------------------------------------------------------

KernelSpec KernelSpec::dirac_delta() { return KernelSpec(DiracDelta{}, 1.0); }

KernelSpec KernelSpec::abel(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw InvalidArgument("Abel kernel requires 1/2 < alpha < 1 so that the resolvent is square "
                          "integrable; got alpha = " +
                          std::to_string(alpha));
  }
  return KernelSpec(Abel{alpha}, alpha);
}

KernelSpec KernelSpec::tabulated(std::vector<double> times, std::vector<double> values,
                                 double power_a) {
  if (times.empty() || times.size() != values.size()) {
    throw InvalidArgument("tabulated kernel needs matching, non-empty time and value columns");
  }
  if (times.front() <= 0.0) throw InvalidArgument("tabulated kernel times must be positive");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw InvalidArgument("tabulated kernel times must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("tabulated kernel values must be finite");
  }
  if (!(power_a >= 0.0) || !std::isfinite(power_a)) {
    throw InvalidArgument("power_a must be a finite non-negative number");
  }
  return KernelSpec(Tabulated{std::move(times), std::move(values)}, power_a);
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, DiracDelta>) {
          os << "delta0";
        } else if constexpr (std::is_same_v<T, Abel>) {
          os << "abel(alpha=" << k.alpha << ")";
        } else {
          os << "tabulated(n=" << k.times.size() << ",a=" << power_a_ << ")";
        }
      },
      variant_);
  return os.str();
}

std::string ResolventSpec::describe() const {
  std::ostringstream os;
  if (const auto* p = as_power()) {
    os << "power(beta=" << p->beta << ")";
  } else {
    const auto& pc = std::get<PiecewiseConstant>(variant_);
    os << "piecewise(dt=" << pc.dt << ",n=" << pc.values.size() << ")";
  }
  return os.str();
}

double kernel_eval(const KernelSpec& spec, double t) {
  if (spec.is_delta()) throw DeltaNotPointwise();
  if (!(t > 0.0)) throw NonpositiveTime(t);
  if (const auto* abel = spec.as_abel()) {
    return std::pow(t, -abel->alpha) / std::tgamma(1.0 - abel->alpha);
  }
  return tabulated_value(*spec.as_tabulated(), t);
}

double kernel_moment(const KernelSpec& spec, int k, double t) {
  if (k < 0) throw InvalidArgument("moment order must be non-negative");
  if (t < 0.0) throw NonpositiveTime(t);
  if (t == 0.0) return 0.0;
  return std::visit(
      [&](const auto& kern) -> double {
        using T = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<T, DiracDelta>) {
          return std::pow(t, k);
        } else if constexpr (std::is_same_v<T, Abel>) {
          return power_moment(1.0 - kern.alpha, k, t);
        } else {
          return tabulated_moment(kern, k, t);
        }
      },
      spec.variant());
}

double kernel_antiderivative(const KernelSpec& spec, int j, double t) {
  if (j < 0) throw InvalidArgument("antiderivative order must be non-negative");
  if (j == 0) return kernel_eval(spec, t);
  return kernel_moment(spec, j - 1, t) / factorial(j - 1);
}

double resolvent_eval(const ResolventSpec& spec, double t) {
  if (!(t > 0.0)) throw NonpositiveTime(t);
  if (const auto* p = spec.as_power()) {
    if (p->beta == 1.0) return 1.0;
    return std::pow(t, p->beta - 1.0) / std::tgamma(p->beta);
  }
  return piecewise_value(*spec.as_piecewise(), t);
}

double resolvent_moment(const ResolventSpec& spec, int k, double t) {
  if (k < 0) throw InvalidArgument("moment order must be non-negative");
  if (t < 0.0) throw NonpositiveTime(t);
  if (const auto* p = spec.as_power()) return power_moment(p->beta, k, t);
  return piecewise_moment(*spec.as_piecewise(), k, t);
}

double resolvent_antiderivative(const ResolventSpec& spec, int j, double t) {
  if (j < 0) throw InvalidArgument("antiderivative order must be non-negative");
  if (j == 0) return resolvent_eval(spec, t);
  return resolvent_moment(spec, j - 1, t) / factorial(j - 1);
}

ResolventSpec resolvent(const KernelSpec& spec, double dt, std::size_t n_steps) {
  if (spec.is_delta()) return ResolventSpec(PowerLaw{1.0});
  if (const auto* abel = spec.as_abel()) return ResolventSpec(PowerLaw{abel->alpha});
  return march_resolvent(spec, dt, n_steps);
}

double resolvent_identity_deviation(const KernelSpec& kernel, const ResolventSpec& res, double dt,
                                    std::size_t n_steps, int subcells) {
  if (dt <= 0.0 || n_steps == 0) throw InvalidArgument("identity check needs dt > 0, n >= 1");
  if (subcells < 1) throw InvalidArgument("subcells must be >= 1");
  double worst = 0.0;

  if (kernel.is_delta()) {
    for (std::size_t n = 1; n <= n_steps; ++n) {
      const double t = static_cast<double>(n) * dt;
      worst = std::max(worst, std::abs(resolvent_eval(res, t) - 1.0));
    }
    return worst;
  }

  if (const auto* pc = res.as_piecewise()) {
    const auto w = pi_weights(kernel, dt, n_steps);
    for (std::size_t n = 1; n <= n_steps; ++n) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        acc += pc->values[std::min(j - 1, pc->values.size() - 1)] * w.lag_weights[n - j];
      }
      worst = std::max(worst, std::abs(acc - 1.0));
    }
    return worst;
  }

  auto eval_k = [&](double s) { return kernel_eval(kernel, s); };
  auto prim_k = [&](int j, double s) { return kernel_antiderivative(kernel, j, s); };
  auto eval_r = [&](double s) { return resolvent_eval(res, s); };
  auto prim_r = [&](int j, double s) { return resolvent_antiderivative(res, j, s); };
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    const std::size_t cells =
        std::max<std::size_t>(1, (n * static_cast<std::size_t>(subcells) + 1) / 2);
    const double value = split_convolution(t, cells, eval_r, prim_r, eval_k, prim_k);
    worst = std::max(worst, std::abs(value - 1.0));
  }
  return worst;
}

double coercivity_functional(const KernelSpec& spec, std::span<const double> y, double dt) {
  if (y.size() < 2) throw InvalidArgument("coercivity functional needs at least two samples");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  const std::size_t n_steps = y.size() - 1;
  const auto w = pi_weights(spec, dt, n_steps);
  std::vector<double> slope(n_steps);
  for (std::size_t j = 1; j <= n_steps; ++j) slope[j - 1] = (y[j] - y[j - 1]) / dt;
  double total = 0.0;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    double conv = 0.0;
    for (std::size_t j = 1; j <= n; ++j) conv += w.lag_weights[n - j] * slope[j - 1];
    total += conv * y[n] * dt;
  }
  return total;
}

AdmissibilityReport kernel_admissible(const KernelSpec& spec, std::span<const double> grid) {
  AdmissibilityReport report;
  if (spec.is_delta()) {
    report.reason = "delta0 satisfies the coercivity assumption directly";
    return report;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw InvalidArgument("admissibility grid must be positive and strictly increasing");
    }
  }
  double previous = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = kernel_eval(spec, grid[i]);
    std::string why;
    if (v < 0.0) {
      why = "kernel is negative";
    } else if (i > 0 && v > previous) {
      why = "kernel increases";
    }
    if (!why.empty()) {
      report.admissible = false;
      report.first_violation = i;
      report.violation_time = grid[i];
      report.violation_value = v;
      report.reason = why;
      return report;
    }
    previous = v;
  }
  report.reason = "nonnegative and nonincreasing on the sample grid";
  return report;
}

KernelSpec load_tabulated_csv(const std::filesystem::path& path, double power_a) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open kernel table " + path.string());
  std::vector<double> times;
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  auto parse = [](std::string_view s, double& out) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    const auto comma = line.find(',');
    double t = 0.0;
    double v = 0.0;
    const bool ok = comma != std::string::npos &&
                    parse(std::string_view(line).substr(0, comma), t) &&
                    parse(std::string_view(line).substr(comma + 1), v);
    if (!ok) {
      if (times.empty() && line_no == 1) continue;  // header
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'time,value'");
    }
    times.push_back(t);
    values.push_back(v);
  }
  return KernelSpec::tabulated(std::move(times), std::move(values), power_a);
}

}  // namespace fjmgt
