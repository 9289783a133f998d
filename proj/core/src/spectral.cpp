#include "fjmgt/spectral.hpp"

#include <cmath>
#include <numbers>

#include "fjmgt/errors.hpp"

namespace fjmgt {

SpectralSpace::SpectralSpace(double length, std::size_t n_modes, std::size_t n_points)
    : length_(length), n_modes_(n_modes) {
  if (!(length > 0.0)) throw InvalidArgument("domain length must be positive");
  if (n_modes == 0) throw InvalidArgument("at least one mode is required");
  const std::size_t minimum = 2 * n_modes + 1;
  n_points_ = n_points == 0 ? minimum : n_points;
  if (n_points_ < minimum) {
    throw InvalidArgument("grid needs at least 2N + 1 = " + std::to_string(minimum) +
                          " points including endpoints");
  }
  const std::size_t p = n_points_ - 1;  // intervals
  const double pi = std::numbers::pi;
  const double norm = std::sqrt(2.0 / length_);
  // cos/sin of k pi / p for k in [0, 2p), so arguments are reduced exactly
  std::vector<double> cos_table(2 * p), sin_table(2 * p);
  for (std::size_t k = 0; k < 2 * p; ++k) {
    cos_table[k] = std::cos(pi * static_cast<double>(k) / static_cast<double>(p));
    sin_table[k] = std::sin(pi * static_cast<double>(k) / static_cast<double>(p));
  }
  sin_table[0] = sin_table[p] = 0.0;
  grid_.resize(n_points_);
  eigenvalues_.resize(n_modes_);
  sine_.resize(n_points_ * n_modes_);
  cosine_.resize(n_points_ * n_modes_);
  for (std::size_t j = 0; j < n_modes_; ++j) {
    const double k = static_cast<double>(j + 1) * pi / length_;
    eigenvalues_[j] = k * k;
  }
  for (std::size_t i = 0; i < n_points_; ++i) {
    grid_[i] = i == p ? length_ : static_cast<double>(i) * spacing();
    for (std::size_t j = 0; j < n_modes_; ++j) {
      const std::size_t idx = ((j + 1) * i) % (2 * p);
      const double k = static_cast<double>(j + 1) * pi / length_;
      sine_[i * n_modes_ + j] = norm * sin_table[idx];
      cosine_[i * n_modes_ + j] = norm * k * cos_table[idx];
    }
  }

  // transfer[j][q] = int_0^L cos(q pi x / L) phi_{j+1}(x) dx
  std::vector<double> transfer(n_modes_ * (p + 1), 0.0);
  for (std::size_t j = 0; j < n_modes_; ++j) {
    const auto m = static_cast<long long>(j + 1);
    for (std::size_t q = 0; q <= p; ++q) {
      const auto qq = static_cast<long long>(q);
      if ((m + qq) % 2 == 0) continue;
      transfer[j * (p + 1) + q] = norm * length_ / pi * 2.0 * static_cast<double>(m) /
                                  static_cast<double>(m * m - qq * qq);
    }
  }
  // type-I cosine transform composed with the transfer integrals
  galerkin_.assign(n_points_ * n_modes_, 0.0);
  const double scale = 2.0 / static_cast<double>(p);
  for (std::size_t i = 0; i < n_points_; ++i) {
    const double wi = (i == 0 || i == p) ? 0.5 : 1.0;
    for (std::size_t q = 0; q <= p; ++q) {
      const double wq = (q == 0 || q == p) ? 0.5 : 1.0;
      const double d = scale * wi * wq * cos_table[(q * i) % (2 * p)];
      for (std::size_t j = 0; j < n_modes_; ++j) {
        galerkin_[i * n_modes_ + j] += transfer[j * (p + 1) + q] * d;
      }
    }
  }
}

std::vector<double> SpectralSpace::synthesize(std::span<const double> xi) const {
  if (xi.size() != n_modes_) throw GridMismatch("modal vector has the wrong number of modes");
  std::vector<double> out(n_points_, 0.0);
  for (std::size_t i = 0; i < n_points_; ++i) {
    const double* row = sine_.data() + i * n_modes_;
    double acc = 0.0;
    for (std::size_t j = 0; j < n_modes_; ++j) acc += row[j] * xi[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> SpectralSpace::synthesize_dx(std::span<const double> xi) const {
  if (xi.size() != n_modes_) throw GridMismatch("modal vector has the wrong number of modes");
  std::vector<double> out(n_points_, 0.0);
  for (std::size_t i = 0; i < n_points_; ++i) {
    const double* row = cosine_.data() + i * n_modes_;
    double acc = 0.0;
    for (std::size_t j = 0; j < n_modes_; ++j) acc += row[j] * xi[j];
    out[i] = acc;
  }
  return out;
}

double SpectralSpace::evaluate(std::span<const double> xi, double x) const {
  if (xi.size() != n_modes_) throw GridMismatch("modal vector has the wrong number of modes");
  const double norm = std::sqrt(2.0 / length_);
  double acc = 0.0;
  for (std::size_t j = 0; j < n_modes_; ++j) {
    acc += xi[j] * norm * std::sin(static_cast<double>(j + 1) * std::numbers::pi * x / length_);
  }
  return acc;
}

ModalVector SpectralSpace::laplacian(std::span<const double> xi) const {
  if (xi.size() != n_modes_) throw GridMismatch("modal vector has the wrong number of modes");
  ModalVector out(n_modes_);
  for (std::size_t j = 0; j < n_modes_; ++j) out[j] = -eigenvalues_[j] * xi[j];
  return out;
}

ModalVector SpectralSpace::project(std::span<const double> samples) const {
  if (samples.size() != n_points_) {
    throw GridMismatch("expected " + std::to_string(n_points_) + " grid samples, got " +
                       std::to_string(samples.size()));
  }
  // endpoint rows of sine_ are zero, so this is the trapezoid rule
  ModalVector out(n_modes_, 0.0);
  const double h = spacing();
  for (std::size_t i = 0; i < n_points_; ++i) {
    const double g = samples[i] * h;
    if (g == 0.0) continue;
    const double* row = sine_.data() + i * n_modes_;
    for (std::size_t j = 0; j < n_modes_; ++j) out[j] += row[j] * g;
  }
  return out;
}

ModalVector SpectralSpace::project_cosine_series(std::span<const double> samples) const {
  if (samples.size() != n_points_) {
    throw GridMismatch("expected " + std::to_string(n_points_) + " grid samples, got " +
                       std::to_string(samples.size()));
  }
  ModalVector out(n_modes_, 0.0);
  for (std::size_t i = 0; i < n_points_; ++i) {
    const double g = samples[i];
    if (g == 0.0) continue;
    const double* row = galerkin_.data() + i * n_modes_;
    for (std::size_t j = 0; j < n_modes_; ++j) out[j] += row[j] * g;
  }
  return out;
}

double SpectralSpace::grid_l2_norm(std::span<const double> samples) const {
  if (samples.size() != n_points_) throw GridMismatch("grid size mismatch");
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  acc -= 0.5 * (samples.front() * samples.front() + samples.back() * samples.back());
  return std::sqrt(acc * spacing());
}

ModalVector nonlinear_galerkin(const SpectralSpace& space, const Nonlinearity& nl,
                               const FieldGrids& f) {
  const std::size_t m = space.points();
  std::vector<double> g(m, 0.0);
  auto need = [&](const std::vector<double>& v, const char* name) {
    if (v.size() != m) throw GridMismatch(std::string("field grid '") + name + "' has wrong size");
  };
  if (nl.family == Family::Westervelt) {
    if (nl.k1 == 0.0) return ModalVector(space.modes(), 0.0);
    need(f.u, "u");
    need(f.ut, "ut");
    need(f.utt, "utt");
    for (std::size_t i = 0; i < m; ++i) {
      g[i] = 2.0 * nl.k1 * (f.u[i] * f.utt[i] + f.ut[i] * f.ut[i]);
    }
  } else {
    if (nl.is_linear()) return ModalVector(space.modes(), 0.0);
    need(f.ut, "ut");
    if (nl.k1 != 0.0) need(f.utt, "utt");
    if (nl.k2 != 0.0) need(f.uxx, "uxx");
    if (nl.k3 != 0.0) {
      need(f.ux, "ux");
      need(f.uxt, "uxt");
    }
    const double c2 = nl.c * nl.c;
    for (std::size_t i = 0; i < m; ++i) {
      double v = 0.0;
      if (nl.k1 != 0.0) v += 2.0 * nl.k1 * f.ut[i] * f.utt[i];
      if (nl.k2 != 0.0) v += 2.0 * nl.k2 * c2 * f.ut[i] * f.uxx[i];
      if (nl.k3 != 0.0) v += 2.0 * nl.k3 * f.ux[i] * f.uxt[i];
      g[i] = v;
    }
  }
  return space.project_cosine_series(g);
}

double sobolev_norm(const SpectralSpace& space, std::span<const double> xi, int order) {
  if (order < 0 || order > 3) throw InvalidArgument("Sobolev order must be in {0,1,2,3}");
  if (xi.size() != space.modes()) throw GridMismatch("modal vector has the wrong number of modes");
  const auto& lambda = space.eigenvalues();
  double acc = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    acc += std::pow(lambda[j], order) * xi[j] * xi[j];
  }
  return std::sqrt(acc);
}

}  // namespace fjmgt
