#include "fjmgt/trajectory.hpp"

#include <charconv>

#include "fjmgt/errors.hpp"

namespace fjmgt {

void Trajectory::reserve(std::size_t snapshots) {
  times_.reserve(snapshots);
  xi_.reserve(snapshots * modes_);
  dxi_.reserve(snapshots * modes_);
  ddxi_.reserve(snapshots * modes_);
}

void Trajectory::push(double t, std::span<const double> xi, std::span<const double> dxi,
                      std::span<const double> ddxi) {
  if (xi.size() != modes_ || dxi.size() != modes_ || ddxi.size() != modes_) {
    throw LengthMismatch("snapshot does not match the trajectory mode count");
  }
  times_.push_back(t);
  xi_.insert(xi_.end(), xi.begin(), xi.end());
  dxi_.insert(dxi_.end(), dxi.begin(), dxi.end());
  ddxi_.insert(ddxi_.end(), ddxi.begin(), ddxi.end());
}

Trajectory Trajectory::subsample(std::size_t stride) const {
  if (stride == 0) throw InvalidArgument("stride must be positive");
  Trajectory out(dt_ * static_cast<double>(stride), modes_, length_);
  out.reserve(times_.size() / stride + 1);
  for (std::size_t k = 0; k < times_.size(); k += stride) out.push(times_[k], xi(k), dxi(k), ddxi(k));
  return out;
}

namespace {

void put(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  for (std::size_t j = 1; j <= traj.modes(); ++j) out += ",xi_" + std::to_string(j);
  for (std::size_t j = 1; j <= traj.modes(); ++j) out += ",dxi_" + std::to_string(j);
  out += '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    put(out, traj.times()[k]);
    for (double v : traj.xi(k)) {
      out += ',';
      put(out, v);
    }
    for (double v : traj.dxi(k)) {
      out += ',';
      put(out, v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace fjmgt
