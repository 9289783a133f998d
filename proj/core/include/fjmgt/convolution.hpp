#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fjmgt/kernels.hpp"

namespace fjmgt {

inline constexpr std::size_t kDefaultWeightCap = 10'000'000;

/// Product-integration weights for a Laplace convolution on a uniform grid.
///
/// lag_weights[m] is the integral of the kernel over [m dt, (m+1) dt]; the
/// integrand is reconstructed as piecewise constant, with the value at t_j
/// standing for the cell (t_{j-1}, t_j]. Hence
///   (k * g)(t_n) ~ sum_{j=1}^{n} lag_weights[n-j] g_j.
struct QuadratureWeights {
  double dt = 0.0;
  std::vector<double> lag_weights;
  std::string kernel_id;

  std::size_t size() const noexcept { return lag_weights.size(); }
  double operator[](std::size_t m) const { return lag_weights[m]; }
};

/// Weights for the kernel convolved `integrations` times with 1, for lags
/// 0..n_steps. Power-law and delta kernels get exact moments; the delta with
/// no integration is the identity (w_0 = 1, all others 0).
QuadratureWeights pi_weights(const KernelSpec& kernel, double dt, std::size_t n_steps,
                             int integrations = 0, std::size_t cap = kDefaultWeightCap);
QuadratureWeights pi_weights(const ResolventSpec& kernel, double dt, std::size_t n_steps,
                             int integrations = 0, std::size_t cap = kDefaultWeightCap);
QuadratureWeights pi_weights(const PowerLaw& kernel, double dt, std::size_t n_steps,
                             std::size_t cap = kDefaultWeightCap);

/// Append-only store of past integrand samples, one row per completed step
/// and one column per channel (mode).
class HistoryBuffer {
 public:
  explicit HistoryBuffer(std::size_t channels = 1) : channels_(channels) {}

  void reserve(std::size_t steps) { data_.reserve(steps * channels_); }
  void append(std::span<const double> row);
  void append(double value) { append(std::span<const double>(&value, 1)); }

  std::size_t size() const noexcept { return channels_ == 0 ? 0 : data_.size() / channels_; }
  std::size_t channels() const noexcept { return channels_; }
  std::span<const double> row(std::size_t step) const {
    return {data_.data() + step * channels_, channels_};
  }

 private:
  std::size_t channels_;
  std::vector<double> data_;
};

/// out[c] = sum_{m=1}^{n} w_m hist[n-m][c], n = hist.size(): the part of the
/// convolution at step n+1 that does not involve the current sample.
void history_sum(const QuadratureWeights& w, const HistoryBuffer& hist, std::span<double> out);

/// out[c] = w_0 current[c] + history_sum(...)[c].
void conv_apply(const QuadratureWeights& w, const HistoryBuffer& hist,
                std::span<const double> current, std::span<double> out);

/// Single-channel convenience overload.
double conv_apply(const QuadratureWeights& w, const HistoryBuffer& hist, double current);

/// L1 approximation of the Caputo derivative of order alpha at every grid
/// point; the first entry is 0.
std::vector<double> caputo_l1(double alpha, std::span<const double> samples, double dt);

}  // namespace fjmgt
