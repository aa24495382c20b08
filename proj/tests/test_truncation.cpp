#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "renyi/rng.hpp"
#include "renyi/truncation.hpp"

using namespace renyi;

namespace {

// Brute-force cell arithmetic for the cap surgery: beta and the capped
// entropy computed by the plainest loop.
struct CapOracle {
  double beta;
  double h_after;
};

CapOracle cap_oracle(const std::vector<double>& w, double cw, double M) {
  double beta = 0.0;
  for (double v : w) beta += std::min(v, M) * cw;
  double h = 0.0;
  for (double v : w) {
    const double c = std::min(v, M) / beta;
    if (c > 0.0) h -= c * std::log(c) * cw;
  }
  return {beta, h};
}

GridDensity random_density(Rng& rng) {
  const std::size_t cells = 2 + rng.index(30);
  std::vector<double> w(cells);
  for (double& x : w) x = rng.uniform(0.0, 1.0);
  if (compensated_sum(w) == 0.0) w[0] = 1.0;
  const double lo = rng.uniform(-2.0, 0.0);
  return GridDensity::normalized(lo, lo + rng.uniform(0.5, 4.0),
                                 std::move(w));
}

}  // namespace

TEST(TruncateBound, NoOpWhenAlreadyBounded) {
  const auto f = GridDensity::uniform(0.0, 1.0, 4);
  const auto cost = CostSpec::linear(1.0, {0.0, 1.0});
  const auto [g, rep] = truncate_bound(f, cost, 2.0);
  EXPECT_NEAR(rep.beta, 1.0, 1e-14);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_NEAR(g.value(i), f.value(i), 1e-14);
}

TEST(TruncateBound, TwoCellOracleInstances) {
  // Density values (3, 1)/2 on [0, 1]: both below M = 2 -> identity.
  const auto f = GridDensity(0.0, 1.0, {1.5, 0.5});
  const auto cost = CostSpec::linear(1.0, {0.0, 1.0});
  {
    const auto oracle = cap_oracle({1.5, 0.5}, 0.5, 2.0);
    const auto [g, rep] = truncate_bound(f, cost, 2.0);
    EXPECT_NEAR(rep.beta, oracle.beta, 1e-14);
    EXPECT_NEAR(rep.beta, 1.0, 1e-14);
    EXPECT_NEAR(rep.h_after, oracle.h_after, 1e-14);
  }
  {
    // M = 1 caps the heavy cell: beta = 0.5*1 + 0.5*0.5 = 0.75.
    const auto oracle = cap_oracle({1.5, 0.5}, 0.5, 1.0);
    const auto [g, rep] = truncate_bound(f, cost, 1.0);
    EXPECT_NEAR(oracle.beta, 0.75, 1e-15);
    EXPECT_NEAR(rep.beta, oracle.beta, 1e-14);
    EXPECT_NEAR(rep.h_after, oracle.h_after, 1e-14);
    EXPECT_NEAR(g.value(0), 1.0 / 0.75, 1e-14);
    EXPECT_NEAR(g.value(1), 0.5 / 0.75, 1e-14);
  }
}

TEST(TruncateBound, TriangularPeakEntropyStaysClose) {
  // Triangular density on [0,1] with peak 2 at x = 1.
  const std::size_t cells = 1 << 10;
  std::vector<double> w(cells);
  for (std::size_t i = 0; i < cells; ++i)
    w[i] = 2.0 * (double(i) + 0.5) / double(cells);
  const auto f = GridDensity::normalized(0.0, 1.0, std::move(w));
  const auto cost = CostSpec::linear(1.0, {0.0, 1.0});
  const auto [g, rep] = truncate_bound(f, cost, 1.5);
  std::vector<double> wv(f.values().begin(), f.values().end());
  const auto oracle = cap_oracle(wv, f.cell_width(), 1.5);
  EXPECT_NEAR(rep.beta, oracle.beta, 1e-12);
  EXPECT_NEAR(rep.h_after, oracle.h_after, 1e-12);
  EXPECT_GE(rep.h_after, rep.h_before - 0.1);
  EXPECT_LE(g.max_value(), 1.5 / rep.beta + 1e-12);
}

TEST(TruncateBound, RejectsSmallM) {
  const auto f = GridDensity::uniform(0.0, 1.0, 4);
  const auto cost = CostSpec::linear(1.0, {0.0, 1.0});
  EXPECT_THROW(truncate_bound(f, cost, 0.5), ValidationError);
}

TEST(PickM, UniformNeedsOnlyOne) {
  const auto f = GridDensity::uniform(0.0, 1.0, 8);
  const auto cost = CostSpec::linear(1.0, {0.0, 1.0});
  EXPECT_EQ(pick_M(f, cost, 0.25), 1.0);
}

TEST(PickM, GaussianConditionsVerifiedPostHoc) {
  const auto f = quantize(Parametric::gaussian(0.0, 1.0), -8.0, 8.0,
                          std::size_t{1} << 12);
  const auto cost = CostSpec::quadratic(1.0, {-8.0, 8.0});
  const double eps = 0.01;
  const double M = pick_M(f, cost, eps);
  const auto rv = cost.table(f);
  double captured = 0.0, excess = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    captured += std::min(f.value(i), M) * f.cell_width();
    excess += (f.value(i) - std::min(f.value(i), M)) * std::abs(rv[i]) *
              f.cell_width();
  }
  EXPECT_GT(captured, 1.0 - eps);
  EXPECT_LT(excess, eps);
}

TEST(PickM, PowerOfTwoSearchStopsByMaxDensity) {
  // Max density 10: the dyadic search can never need more than M = 16.
  std::vector<double> w = {10.0, 0.5, 0.5};
  const auto f = GridDensity::normalized(0.0, 1.0, std::move(w));
  const auto cost = CostSpec::linear(1.0, {0.0, 1.0});
  const double M = pick_M(f, cost, 0.5);
  EXPECT_LE(M, 16.0);
  const double lg = std::log2(M);
  EXPECT_NEAR(lg, std::round(lg), 1e-12);
}

TEST(RestrictDomain, NonnegativeCostIsIdentity) {
  const auto f = GridDensity(0.0, 1.0, {1.25, 0.75});
  const auto cost = CostSpec::quadratic(1.0, {0.0, 1.0});
  const auto [g, rep] = restrict_domain(f, cost, 0.1);
  EXPECT_NEAR(rep.beta, 1.0, 1e-14);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_NEAR(g.value(i), f.value(i), 1e-14);
}

TEST(RestrictDomain, UniformIntervalArithmetic) {
  // f uniform on [-1,1], r(x) = x, k = 0.5: D_k = {x >= -0.5}.
  const auto f = GridDensity::uniform(-1.0, 1.0, 8);
  const auto cost = CostSpec::linear(1.0, {-1.0, 1.0});
  const auto [g, rep] = restrict_domain(f, cost, 0.5);
  EXPECT_NEAR(rep.beta, 0.75, 1e-12);
  EXPECT_NEAR(rep.h, std::log(1.5), 1e-12);
  EXPECT_EQ(g.value(0), 0.0);
  EXPECT_EQ(g.value(1), 0.0);
}

TEST(RestrictDomain, EmptyDomainThrows) {
  const auto f = GridDensity::uniform(-1.0, -0.5, 4);
  const CostSpec cost([](double x) { return x; }, {-1.0, -0.5}, 0.0);
  EXPECT_THROW(restrict_domain(f, cost, 0.1), ConstructionError);
}

TEST(RestrictDomain, MonotoneConvergenceAlongKSchedule) {
  // Heavy negative cost on the left end; growing k recovers h(f).
  const std::size_t cells = 256;
  std::vector<double> w(cells);
  Rng rng(5);
  for (double& x : w) x = rng.uniform(0.2, 1.0);
  const auto f = GridDensity::normalized(-1.0, 1.0, std::move(w));
  const CostSpec cost([](double x) { return x < 0 ? 50.0 * x : x; },
                      {-1.0, 1.0}, 0.0);
  const double h_full = shannon_entropy(f).nats;
  double prev_cost = kInf;
  std::vector<double> hs;
  for (double k : {1.0, 5.0, 10.0, 25.0, 50.0}) {
    const auto [g, rep] = restrict_domain(f, cost, k);
    hs.push_back(rep.h);
    EXPECT_TRUE(std::isfinite(rep.abs_cost));
    // Growing D_k keeps adding negative-cost territory.
    EXPECT_LE(rep.cost, prev_cost + 1e-12);
    prev_cost = rep.cost;
  }
  EXPECT_NEAR(hs.back(), h_full, 1e-3);
  for (std::size_t i = 1; i < hs.size(); ++i)
    EXPECT_GE(hs[i], hs[i - 1] - 1e-9);
}

TEST(BoundedApproach, PipelineGuaranteesOn500RandomInstances) {
  Rng rng(90210);
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = random_density(rng);
    const double a = rng.uniform(0.2, 2.0);
    const double b = rng.uniform(-1.0, 1.0);
    CostSpec cost([a, b](double x) { return a * x + b * x * x; },
                  {f.lo(), f.hi()}, 0.0, {}, f.size());
    const double gamma = cost_expectation(f, cost).value + 1e-12;
    cost = cost.with_gamma(gamma);
    const double delta = rng.uniform(0.02, 0.5);
    const auto [g, rep] = bounded_approach(f, cost, delta);
    const double h_f = shannon_entropy(f).nats;
    const double cost_g = cost_expectation(g, cost).value;
    const double h_g = shannon_entropy(g).nats;
    if (cost_g > gamma + delta + 1e-9) ++violations;
    if (h_g < h_f - delta - 1e-9) ++violations;
    if (!(g.max_value() <= rep.M / rep.truncation.beta + 1e-9)) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(TruncationReport, CostAndEntropyBoundsOnRandomInstances) {
  Rng rng(1618);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_density(rng);
    const double b = rng.uniform(-2.0, 2.0);
    const CostSpec cost([b](double x) { return b * x; }, {f.lo(), f.hi()},
                        0.0, {}, f.size());
    const double gamma = cost_expectation(f, cost).value;
    const double eps = rng.uniform(0.05, 0.45);
    const double M = pick_M(f, cost.with_gamma(gamma), eps);
    const auto [g, rep] = truncate_bound(f, cost.with_gamma(gamma), M);
    const double e = 1.0 - rep.beta;
    ASSERT_LE(e, eps + 1e-12);
    // Cost bound: cost_after <= Gamma + e/(1-e) |Gamma| + e/(1-e).
    EXPECT_LE(rep.cost_after, gamma + e / (1.0 - e) * std::abs(gamma) +
                                  e / (1.0 - e) + 1e-9);
    // Entropy bound: h_after >= ln(1-e) + h_before - e/(1-e) |h_before|.
    EXPECT_GE(rep.h_after,
              std::log1p(-e) + rep.h_before -
                  e / (1.0 - e) * std::abs(rep.h_before) - 1e-9);
  }
}
