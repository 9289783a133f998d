#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fjmgt {

/// Coefficients in the orthonormal Dirichlet sine basis, index j-1 for mode j.
using ModalVector = std::vector<double>;

enum class Family { Westervelt, KuznetsovBlackstock };

/// Coefficients of the quadratic nonlinearities.
///   Westervelt:            a = 1 + 2 k1 u,   b = 1,              N = 2 k1 u_t^2
///   Kuznetsov-Blackstock:  a = 1 + 2 k1 u_t, b = 1 - 2 k2 u_t,   N = 2 k3 u_x u_xt
struct Nonlinearity {
  Family family = Family::Westervelt;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double c = 1.0;

  bool is_linear() const noexcept { return k1 == 0.0 && k2 == 0.0 && k3 == 0.0; }
};

/// Field samples on the interior quadrature grid.
struct FieldGrids {
  std::vector<double> u, ut, utt, ux, uxt, uxx;
};

/// Sine-Galerkin space on (0, L): phi_j(x) = sqrt(2/L) sin(j pi x / L),
/// j = 1..N, sampled on the uniform grid x_i = i L / P, i = 0..P, endpoints
/// included, with P >= 2N intervals.
///
/// Sine data is projected with the discrete sine transform. Quadratic terms
/// are cosine series of degree <= 2N; their cosine coefficients are recovered
/// exactly by a type-I cosine transform and mapped to the sine modes with the
/// analytic integrals of cos * sin, so their Galerkin coefficients are exact.
class SpectralSpace {
 public:
  /// n_points counts grid points including both endpoints (default 2N + 1).
  SpectralSpace(double length, std::size_t n_modes, std::size_t n_points = 0);

  double length() const noexcept { return length_; }
  std::size_t modes() const noexcept { return n_modes_; }
  std::size_t points() const noexcept { return n_points_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_points_ - 1); }
  const std::vector<double>& grid() const noexcept { return grid_; }
  /// lambda_j = (j pi / L)^2.
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }

  /// Samples of sum_j xi_j phi_j on the grid.
  std::vector<double> synthesize(std::span<const double> xi) const;
  /// Samples of the x-derivative.
  std::vector<double> synthesize_dx(std::span<const double> xi) const;
  /// Value of sum_j xi_j phi_j at an arbitrary point x in [0, L].
  double evaluate(std::span<const double> xi, double x) const;
  /// Coefficients of the Laplacian, -lambda_j xi_j.
  ModalVector laplacian(std::span<const double> xi) const;
  /// <g, phi_j> by the discrete sine transform (exact for sine series of
  /// degree < P); throws GridMismatch.
  ModalVector project(std::span<const double> samples) const;
  /// Exact <g, phi_j> for the cosine interpolant of the samples; this is how
  /// products of fields are projected. Throws GridMismatch.
  ModalVector project_cosine_series(std::span<const double> samples) const;

  /// Trapezoid L2 norm of grid samples.
  double grid_l2_norm(std::span<const double> samples) const;

 private:
  double length_;
  std::size_t n_modes_;
  std::size_t n_points_;
  std::vector<double> grid_;
  std::vector<double> eigenvalues_;
  std::vector<double> sine_;      // n_points x n_modes, row major
  std::vector<double> cosine_;    // derivative of the basis, same layout
  std::vector<double> galerkin_;  // n_points x n_modes: samples -> exact projection
};

inline ModalVector project(const SpectralSpace& space, std::span<const double> samples) {
  return space.project(samples);
}
inline std::vector<double> synthesize(const SpectralSpace& space, std::span<const double> xi) {
  return space.synthesize(xi);
}

/// Galerkin coefficients of the nonlinear part of the equation, i.e. what has
/// to be added to the linear operator u_tt - c^2 u_xx - delta u_xt:
///   Westervelt:   2 k1 (u u_tt + u_t^2)
///   KB:           2 k1 u_t u_tt + 2 k2 c^2 u_t u_xx + 2 k3 u_x u_xt
/// Products are formed pointwise on the grid and projected with
/// project_cosine_series.
ModalVector nonlinear_galerkin(const SpectralSpace& space, const Nonlinearity& nl,
                               const FieldGrids& fields);

/// (sum_j lambda_j^order xi_j^2)^{1/2}: the L2 norm of u, grad u, Laplacian u
/// or grad Laplacian u for order 0..3.
double sobolev_norm(const SpectralSpace& space, std::span<const double> xi, int order);

}  // namespace fjmgt
