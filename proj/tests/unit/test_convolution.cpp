#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <fjmgt/convolution.hpp>
#include <fjmgt/errors.hpp>

#include "support/oracles.hpp"

using namespace fjmgt;

namespace {

// Direct O(n^2) product-integration sum, independent of HistoryBuffer.
std::vector<double> naive_conv(const QuadratureWeights& w, const std::vector<double>& g) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t n = 1; n < g.size(); ++n) {
    for (std::size_t j = 1; j <= n; ++j) out[n] += w[n - j] * g[j];
  }
  return out;
}

}  // namespace

TEST(PiWeights, AbelFirstWeight) {
  const auto w = pi_weights(KernelSpec::abel(0.75), 0.1, 10);
  EXPECT_NEAR(w[0], std::pow(0.1, 0.25) / oracle::gamma(1.25), 1e-14);
  // quoted as 0.620350; the true value is 0.6204102
  EXPECT_NEAR(w[0], 0.620350, 1e-4);
  EXPECT_EQ(w.size(), 11u);
}

TEST(PiWeights, DeltaIsIdentity) {
  const auto w = pi_weights(KernelSpec::dirac_delta(), 0.37, 5);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  for (std::size_t m = 1; m < w.size(); ++m) EXPECT_DOUBLE_EQ(w[m], 0.0);
}

TEST(PiWeights, ConstantResolventIsRectangleRule) {
  const auto w = pi_weights(resolvent(KernelSpec::dirac_delta()), 0.1, 20);
  for (std::size_t m = 0; m < w.size(); ++m) EXPECT_NEAR(w[m], 0.1, 1e-15);
}

TEST(PiWeights, ExactMoments) {
  for (double alpha : {0.6, 0.75, 0.9}) {
    const double dt = 1e-2;
    const auto w = pi_weights(KernelSpec::abel(alpha), dt, 500);
    double partial = 0.0;
    for (std::size_t n = 1; n <= 500; ++n) {
      partial += w[n - 1];
      const double t = static_cast<double>(n) * dt;
      const double exact = std::pow(t, 1.0 - alpha) / oracle::gamma(2.0 - alpha);
      ASSERT_NEAR(partial, exact, 1e-12 * exact) << "alpha " << alpha << " n " << n;
    }
  }
}

TEST(PiWeights, PositiveAndNonincreasing) {
  const auto w = pi_weights(KernelSpec::abel(0.6), 1e-3, 2000);
  for (std::size_t m = 0; m < w.size(); ++m) {
    ASSERT_GT(w[m], 0.0);
    ASSERT_TRUE(std::isfinite(w[m]));
    if (m > 0) ASSERT_LE(w[m], w[m - 1]);
  }
}

TEST(PiWeights, IntegratedKernelsMatchAntiderivatives) {
  const auto k = KernelSpec::abel(0.75);
  const double dt = 0.05;
  for (int j : {1, 2}) {
    const auto w = pi_weights(k, dt, 40, j);
    for (std::size_t m = 0; m <= 40; ++m) {
      const double exact = kernel_antiderivative(k, j + 1, (m + 1) * dt) -
                           kernel_antiderivative(k, j + 1, m * dt);
      EXPECT_NEAR(w[m], exact, 1e-12 * std::abs(exact) + 1e-16);
    }
  }
}

TEST(PiWeights, Errors) {
  EXPECT_THROW(pi_weights(KernelSpec::abel(0.75), 0.0, 10), InvalidArgument);
  EXPECT_THROW(pi_weights(KernelSpec::abel(0.75), 0.1, 0), InvalidArgument);
  EXPECT_THROW(pi_weights(KernelSpec::abel(0.75), 0.1, 101, 0, 100), WeightOverflow);
  EXPECT_NO_THROW(pi_weights(KernelSpec::abel(0.75), 0.1, 100, 0, 100));
}

TEST(ConvApply, EmptyHistory) {
  QuadratureWeights w{0.1, {0.5, 0.25}, "test"};
  HistoryBuffer hist(1);
  EXPECT_DOUBLE_EQ(conv_apply(w, hist, 3.0), 1.5);
}

TEST(ConvApply, ConstantIntegrandReproducesMoment) {
  const double alpha = 0.75, dt = 1e-3;
  const auto k = KernelSpec::abel(alpha);
  const auto w = pi_weights(k, dt, 1000);
  HistoryBuffer hist(1);
  for (std::size_t n = 1; n <= 1000; ++n) {
    const double value = conv_apply(w, hist, 1.0);
    const double t = static_cast<double>(n) * dt;
    ASSERT_NEAR(value, std::pow(t, 1.0 - alpha) / oracle::gamma(2.0 - alpha), 1e-12);
    hist.append(1.0);
  }
}

TEST(ConvApply, DeltaIsIdentity) {
  const auto w = pi_weights(KernelSpec::dirac_delta(), 0.1, 10);
  HistoryBuffer hist(1);
  for (double v : {3.0, -1.0, 8.5}) hist.append(v);
  EXPECT_DOUBLE_EQ(conv_apply(w, hist, 4.25), 4.25);
}

TEST(ConvApply, MatchesNaiveSumAndIsLinear) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto w = pi_weights(KernelSpec::abel(0.6), 1e-2, 300);
  std::vector<double> h1(301, 0.0), h2(301, 0.0);
  for (std::size_t i = 1; i <= 300; ++i) {
    h1[i] = g(rng);
    h2[i] = g(rng);
  }
  const auto ref1 = naive_conv(w, h1);
  const auto ref2 = naive_conv(w, h2);
  const double a = 1.7, b = -0.3;
  HistoryBuffer b1(1), b2(1), mix(1);
  for (std::size_t n = 1; n <= 300; ++n) {
    const double c1 = conv_apply(w, b1, h1[n]);
    const double c2 = conv_apply(w, b2, h2[n]);
    const double cm = conv_apply(w, mix, a * h1[n] + b * h2[n]);
    ASSERT_NEAR(c1, ref1[n], 1e-12);
    ASSERT_NEAR(cm, a * c1 + b * c2, 1e-12);
    b1.append(h1[n]);
    b2.append(h2[n]);
    mix.append(a * h1[n] + b * h2[n]);
  }
}

TEST(ConvApply, LengthMismatch) {
  QuadratureWeights w{0.1, {1.0, 0.5}, "short"};
  HistoryBuffer hist(1);
  hist.append(1.0);
  EXPECT_NO_THROW(conv_apply(w, hist, 1.0));
  hist.append(1.0);
  EXPECT_THROW(conv_apply(w, hist, 1.0), LengthMismatch);
  HistoryBuffer two(2);
  EXPECT_THROW(two.append(std::vector<double>{1.0}), LengthMismatch);
}

TEST(ConvApply, MultiChannel) {
  const auto w = pi_weights(KernelSpec::abel(0.75), 0.1, 4);
  HistoryBuffer hist(2);
  hist.append(std::vector<double>{1.0, 2.0});
  hist.append(std::vector<double>{3.0, 4.0});
  std::vector<double> cur{5.0, 6.0}, out(2);
  conv_apply(w, hist, cur, out);
  EXPECT_NEAR(out[0], w[0] * 5.0 + w[1] * 3.0 + w[2] * 1.0, 1e-15);
  EXPECT_NEAR(out[1], w[0] * 6.0 + w[1] * 4.0 + w[2] * 2.0, 1e-15);
}

TEST(ConvApply, MemorySimplificationSurrogate) {
  // K * (1 * K~ * v) against (1 * 1) * v = t * v on random bounded v.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double alpha : {0.6, 0.75, 0.9}) {
    const double dt = 1e-3;
    const std::size_t n = 1000;
    const auto k = KernelSpec::abel(alpha);
    const auto wk = pi_weights(k, dt, n);
    const auto wr1 = pi_weights(resolvent(k), dt, n, 1);
    const auto wt = pi_weights(PowerLaw{2.0}, dt, n);
    std::vector<double> v(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) v[i] = u(rng);
    const auto nu = naive_conv(wr1, v);
    const auto lhs = naive_conv(wk, nu);
    const auto rhs = naive_conv(wt, v);
    double worst = 0.0;
    for (std::size_t i = 1; i <= n; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    EXPECT_LE(worst, 5.0 * dt) << "alpha " << alpha;
  }
}

TEST(CaputoL1, LinearFunction) {
  const double dt = 1e-3;
  std::vector<double> f(1001);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i) * dt;
  const auto d = caputo_l1(0.75, f, dt);
  const double exact = 1.0 / oracle::gamma(1.25);
  EXPECT_NEAR(exact, 1.103263, 1e-6);
  EXPECT_NEAR(d.back(), exact, 0.02 * exact);
  EXPECT_DOUBLE_EQ(d.front(), 0.0);
}

TEST(CaputoL1, ConstantIsZero) {
  std::vector<double> f(50, 3.0);
  for (double v : caputo_l1(0.5, f, 0.1)) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(CaputoL1, Quadratic) {
  const double dt = 1e-3;
  std::vector<double> f(1001);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(static_cast<double>(i) * dt, 2);
  const auto d = caputo_l1(0.5, f, dt);
  const double exact = 2.0 / oracle::gamma(2.5);
  EXPECT_NEAR(exact, 1.504506, 1e-6);
  EXPECT_NEAR(d.back(), exact, 0.02 * exact);
}

TEST(CaputoL1, SelfConvergenceOrder) {
  const double alpha = 0.75;
  auto at_one = [&](std::size_t n) {
    const double dt = 1.0 / static_cast<double>(n);
    std::vector<double> f(n + 1);
    for (std::size_t i = 0; i <= n; ++i) f[i] = std::pow(static_cast<double>(i) * dt, 2);
    return caputo_l1(alpha, f, dt).back();
  };
  const double a = at_one(250), b = at_one(500), c = at_one(1000);
  const double order = std::log2(std::abs(b - a) / std::abs(c - b));
  EXPECT_GE(order, 2.0 - alpha - 0.2);
}

TEST(CaputoL1, Errors) {
  EXPECT_THROW(caputo_l1(0.5, std::vector<double>{1.0}, 0.1), InvalidArgument);
  EXPECT_THROW(caputo_l1(1.0, std::vector<double>{1.0, 2.0}, 0.1), InvalidArgument);
}
