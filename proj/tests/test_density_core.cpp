#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "renyi/entropy.hpp"
#include "renyi/grid_density.hpp"
#include "renyi/maxent.hpp"
#include "renyi/rng.hpp"

using namespace renyi;

namespace {

GridDensity random_density(Rng& rng, std::size_t min_cells = 2,
                           std::size_t max_cells = 64, bool allow_zero = true) {
  const std::size_t cells =
      min_cells + rng.index(max_cells - min_cells + 1);
  const double lo = rng.uniform(-3.0, 1.0);
  const double hi = lo + rng.uniform(0.5, 6.0);
  std::vector<double> w(cells);
  for (double& x : w) {
    x = rng.uniform01();
    if (allow_zero && rng.uniform01() < 0.1) x = 0.0;
  }
  if (compensated_sum(w) == 0.0) w[0] = 1.0;
  return GridDensity::normalized(lo, hi, std::move(w));
}

// Smooth test densities for the alpha -> 1 continuity check: quantised
// mixtures of a few Gaussians.
GridDensity random_smooth_density(Rng& rng) {
  const int k = 1 + int(rng.index(3));
  std::vector<double> mu(k), sigma(k), q(k);
  double qs = 0.0;
  for (int i = 0; i < k; ++i) {
    mu[i] = rng.uniform(-2.0, 2.0);
    sigma[i] = rng.uniform(0.5, 1.5);
    q[i] = rng.uniform(0.2, 1.0);
    qs += q[i];
  }
  const std::size_t cells = 1 << 10;
  std::vector<double> w(cells);
  const double lo = -12.0, hi = 12.0;
  const double cw = (hi - lo) / double(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double x = lo + (double(i) + 0.5) * cw;
    double v = 0.0;
    for (int j = 0; j < k; ++j) {
      const double z = (x - mu[j]) / sigma[j];
      v += q[j] / qs * std::exp(-0.5 * z * z) /
           (sigma[j] * std::sqrt(2.0 * M_PI));
    }
    w[i] = v;
  }
  return GridDensity::normalized(lo, hi, std::move(w));
}

}  // namespace

TEST(GridDensity, ValidatesNormalisation) {
  EXPECT_THROW(GridDensity(0.0, 1.0, {2.0, 1.0}), ValidationError);
  EXPECT_THROW(GridDensity(0.0, 1.0, {-1.0, 3.0}), ValidationError);
  EXPECT_THROW(GridDensity(1.0, 0.0, {1.0}), ValidationError);
  EXPECT_NO_THROW(GridDensity(0.0, 1.0, {1.5, 0.5}));
}

TEST(RenyiEntropy, UniformCases) {
  const auto u01 = GridDensity::uniform(0.0, 1.0, 8);
  EXPECT_NEAR(renyi_entropy(u01, 2.0).nats, 0.0, 1e-14);
  const auto u02 = GridDensity::uniform(0.0, 2.0, 8);
  EXPECT_NEAR(renyi_entropy(u02, 2.0).nats, std::log(2.0), 1e-14);
  EXPECT_THROW(renyi_entropy(u01, 1.0), ValidationError);
  EXPECT_THROW(renyi_entropy(u01, -0.5), ValidationError);
}

TEST(RenyiEntropy, GaussianClosedFormVsQuadrature) {
  const auto p = Parametric::gaussian(0.0, 1.0);
  const auto g = quantize(p, -8.0, 8.0, std::size_t{1} << 14);
  // Closed form: (1/2) ln(2 pi) + ln(2)/2.
  const double closed = 0.5 * std::log(2.0 * M_PI) + 0.5 * std::log(2.0);
  EXPECT_NEAR(closed, 1.2655121234846454, 1e-12);
  EXPECT_NEAR(renyi_entropy(g, 2.0).nats, closed, 1e-6);
  EXPECT_NEAR(gaussian_renyi(1.0, 2.0), closed, 1e-12);
  // Independent high-resolution quadrature oracle.
  const double by_oracle = oracle::renyi_from_pdf(p.pdf, -8.0, 8.0, 2.0);
  EXPECT_NEAR(renyi_entropy(g, 2.0).nats, by_oracle, 1e-6);
}

TEST(ShannonEntropy, KnownCases) {
  EXPECT_NEAR(shannon_entropy(GridDensity::uniform(0.0, 1.0, 4)).nats, 0.0,
              1e-14);
  EXPECT_NEAR(shannon_entropy(GridDensity::uniform(0.0, 2.0, 4)).nats,
              std::log(2.0), 1e-14);
  const auto p = Parametric::gaussian(0.0, 1.0);
  const auto g = quantize(p, -8.0, 8.0, std::size_t{1} << 14);
  EXPECT_NEAR(shannon_entropy(g).nats, gaussian_shannon(1.0), 1e-6);
  EXPECT_NEAR(shannon_entropy(g).nats,
              oracle::shannon_from_pdf(p.pdf, -8.0, 8.0), 1e-6);
}

TEST(CostExpectation, Examples) {
  const auto u01 = GridDensity::uniform(0.0, 1.0, 1 << 10);
  const auto lin = CostSpec::linear(0.5, {0.0, 1.0});
  EXPECT_NEAR(cost_expectation(u01, lin).value, 0.5, 1e-9);

  const auto u11 = GridDensity::uniform(-1.0, 1.0, 1 << 10);
  const auto quad = CostSpec::quadratic(1.0, {-1.0, 1.0});
  EXPECT_NEAR(cost_expectation(u11, quad).value, 1.0 / 3.0, 1e-6);

  const auto g = quantize(Parametric::gaussian(0.0, 1.0), -8.0, 8.0,
                          std::size_t{1} << 14);
  const auto quad_r = CostSpec::quadratic(1.0, {-8.0, 8.0});
  EXPECT_NEAR(cost_expectation(g, quad_r).value, 1.0, 1e-6);
  // abs-cost channel agrees with the plain moment here (r >= 0).
  EXPECT_NEAR(cost_expectation(g, quad_r).abs_value,
              cost_expectation(g, quad_r).value, 1e-15);
}

TEST(KlDivergence, Examples) {
  const auto f = GridDensity(0.0, 1.0, {1.5, 0.5});
  EXPECT_NEAR(kl_divergence(f, f), 0.0, 1e-15);

  const auto g = GridDensity::uniform(0.0, 1.0, 2);
  // Two-term hand computation: 0.5 ln(1/1.5) + 0.5 ln(1/0.5).
  const double expected = 0.5 * std::log(1.0 / 1.5) + 0.5 * std::log(2.0);
  EXPECT_NEAR(expected, 0.14384103622589045, 1e-15);
  EXPECT_NEAR(kl_divergence(g, f), expected, 1e-14);

  const auto fz = GridDensity(0.0, 1.0, {2.0, 0.0});
  EXPECT_EQ(kl_divergence(g, fz), kInf);

  const auto other_grid = GridDensity::uniform(0.0, 2.0, 2);
  EXPECT_THROW(kl_divergence(g, other_grid), ValidationError);
}

TEST(Quantize, GaussianMomentAndTailError) {
  const auto p = Parametric::gaussian(0.0, 1.0);
  const auto g = quantize(p, -8.0, 8.0, std::size_t{1} << 14);
  double m2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    m2 += g.mass(i) * g.midpoint(i) * g.midpoint(i);
  EXPECT_NEAR(m2, oracle::moment_from_pdf(p.pdf, [](double x) { return x * x; },
                                          -8.0, 8.0),
              1e-9);
  EXPECT_NEAR(m2, 1.0, 1e-6);

  const auto u = quantize(Parametric::uniform(0.0, 1.0), 0.0, 1.0, 7);
  for (std::size_t i = 0; i < u.size(); ++i)
    EXPECT_NEAR(u.value(i), 1.0, 1e-12);

  // Tail mass 2 Phi(-1) blocks quantisation on [-1, 1] without an override.
  const double lost = oracle::gaussian_two_sided_tail(1.0);
  EXPECT_NEAR(lost, 0.31731050786291415, 1e-12);
  try {
    quantize(p, -1.0, 1.0, 64);
    FAIL() << "expected TailMassError";
  } catch (const TailMassError& e) {
    EXPECT_NEAR(e.lost_mass, lost, 1e-9);
  }
  EXPECT_NO_THROW(quantize(p, -1.0, 1.0, 64, /*tail_tol=*/0.5));
}

TEST(OrderingInvariant, RenyiVsShannonOn1000RandomDensities) {
  Rng rng(20240811);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto f = random_density(rng);
    const double h = shannon_entropy(f).nats;
    const double alpha_hi = 1.0 + rng.uniform(0.05, 4.0);
    const double alpha_lo = rng.uniform(0.05, 0.95);
    if (renyi_entropy(f, alpha_hi).nats > h + 1e-9) ++violations;
    if (renyi_entropy(f, alpha_lo).nats < h - 1e-9) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(OrderingInvariant, AlphaToOneContinuityOnSmoothDensities) {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const auto f = random_smooth_density(rng);
    const double h = shannon_entropy(f).nats;
    EXPECT_LE(std::abs(renyi_entropy(f, 1.0 + 1e-3).nats - h), 1e-2);
    EXPECT_LE(std::abs(renyi_entropy(f, 1.0 - 1e-3).nats - h), 1e-2);
  }
}

TEST(OrderingInvariant, LogSupportUpperBound) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_density(rng);
    const double log_supp = std::log(f.hi() - f.lo());
    const double alpha = rng.uniform01() < 0.5 ? rng.uniform(0.05, 0.95)
                                               : 1.0 + rng.uniform(0.05, 4.0);
    EXPECT_LE(renyi_entropy(f, alpha).nats, log_supp + 1e-9);
  }
}

TEST(OrderingInvariant, BoundedDensityLowerBound) {
  Rng rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_density(rng);
    const double M = std::max(1.0, f.max_value());
    const double alpha = 1.0 + rng.uniform(0.05, 4.0);
    const double h = renyi_entropy(f, alpha).nats;
    EXPECT_TRUE(std::isfinite(h));
    EXPECT_GE(h, alpha / (1.0 - alpha) * std::log(M) - 1e-9);
  }
}

TEST(KlDivergence, GibbsNonnegativity) {
  Rng rng(555);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t cells = 2 + rng.index(31);
    std::vector<double> a(cells), b(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      a[i] = 0.05 + rng.uniform01();
      b[i] = 0.05 + rng.uniform01();
    }
    const auto g = GridDensity::normalized(0.0, 1.0, a);
    const auto f = GridDensity::normalized(0.0, 1.0, b);
    EXPECT_GE(kl_divergence(g, f), -1e-12);
  }
  const auto f = GridDensity(0.0, 1.0, {1.25, 0.75});
  EXPECT_NEAR(kl_divergence(f, f), 0.0, 1e-15);
}

TEST(EntropyValue, ConventionGuards) {
  EXPECT_THROW(EntropyValue(-kInf, 0.5), ValidationError);
  EXPECT_THROW(EntropyValue(kInf, 2.0), ValidationError);
  EXPECT_NO_THROW(EntropyValue(kInf, 0.5));
  EXPECT_NO_THROW(EntropyValue(-kInf, 2.0));
}
