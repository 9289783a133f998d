#pragma once

// Closed-form reference solutions used by the unit and acceptance tests.
// Nothing here calls into the library.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

using cplx = std::complex<double>;

inline double gamma(double x) { return boost::math::tgamma(x); }

/// Roots of the monic-free polynomial coeffs[0] s^n + ... + coeffs[n] from the
/// companion matrix.
inline std::vector<cplx> poly_roots(const std::vector<double>& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) companion(0, i) = -coeffs[i + 1] / coeffs[0];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
  std::vector<cplx> roots;
  for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
  return roots;
}

/// y(t) = sum_i c_i exp(r_i t) matching y^(k)(0) = init[k].
class ExponentialSum {
 public:
  ExponentialSum(std::vector<cplx> roots, const std::vector<double>& init) : roots_(std::move(roots)) {
    const int n = static_cast<int>(roots_.size());
    Eigen::MatrixXcd v(n, n);
    Eigen::VectorXcd rhs(n);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) v(k, i) = std::pow(roots_[i], k);
      rhs(k) = init[k];
    }
    Eigen::VectorXcd c = v.fullPivLu().solve(rhs);
    for (int i = 0; i < n; ++i) coef_.push_back(c(i));
  }
  double operator()(double t) const { return derivative(t, 0); }
  double derivative(double t, int order) const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < roots_.size(); ++i) {
      acc += coef_[i] * std::pow(roots_[i], order) * std::exp(roots_[i] * t);
    }
    return acc.real();
  }

 private:
  std::vector<cplx> roots_;
  std::vector<cplx> coef_;
};

/// Modal JMGT solution: tau y''' + y'' + (delta + tau c^2) lambda y' + c^2 lambda y = 0.
inline ExponentialSum jmgt_mode(double tau, double delta, double c, double lambda, double y0,
                                double y1, double y2) {
  const double c2 = c * c;
  return ExponentialSum(poly_roots({tau, 1.0, (delta + tau * c2) * lambda, c2 * lambda}),
                        {y0, y1, y2});
}

/// Damped oscillator y'' + delta lambda y' + c^2 lambda y = 0.
inline ExponentialSum damped_mode(double delta, double c, double lambda, double y0, double y1) {
  return ExponentialSum(poly_roots({1.0, delta * lambda, c * c * lambda}), {y0, y1});
}

/// int_0^t (t-s)^{-alpha} s^k ds / Gamma(1-alpha) by tanh-sinh quadrature.
inline double abel_moment_quadrature(double alpha, int k, double t) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  // xc is the distance to the nearer endpoint, b - s on the right half
  auto f = [&](double s, double xc) {
    const double gap = s > 0.5 * t ? xc : t - s;
    return std::pow(gap, -alpha) * std::pow(s, k);
  };
  return integrator.integrate(f, 0.0, t) / gamma(1.0 - alpha);
}

}  // namespace oracle
