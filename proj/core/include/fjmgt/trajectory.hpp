#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fjmgt {

/// Modal snapshots on a uniform time grid; snapshot k is at t = k dt.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(double dt, std::size_t n_modes, double length) : dt_(dt), modes_(n_modes), length_(length) {}

  void reserve(std::size_t snapshots);
  void push(double t, std::span<const double> xi, std::span<const double> dxi,
            std::span<const double> ddxi);

  double dt() const noexcept { return dt_; }
  double length() const noexcept { return length_; }
  std::size_t modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return times_.size(); }
  std::size_t steps() const noexcept { return times_.empty() ? 0 : times_.size() - 1; }
  const std::vector<double>& times() const noexcept { return times_; }

  std::span<const double> xi(std::size_t k) const { return {xi_.data() + k * modes_, modes_}; }
  std::span<const double> dxi(std::size_t k) const { return {dxi_.data() + k * modes_, modes_}; }
  std::span<const double> ddxi(std::size_t k) const { return {ddxi_.data() + k * modes_, modes_}; }

  /// Every `stride`-th snapshot (used to compare runs on nested grids).
  Trajectory subsample(std::size_t stride) const;

  bool operator==(const Trajectory& other) const = default;

 private:
  double dt_ = 0.0;
  std::size_t modes_ = 0;
  double length_ = 1.0;
  std::vector<double> times_;
  std::vector<double> xi_;
  std::vector<double> dxi_;
  std::vector<double> ddxi_;
};

/// Columnar CSV: t, xi_1..xi_N, dxi_1..dxi_N with round-trip precision.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace fjmgt
