#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "renyi/maxent.hpp"
#include "renyi/rng.hpp"

using namespace renyi;

namespace {

// Independent route to h*(Gamma): scan lambda1 on a grid, form the tilted
// density by plain sums, keep the best entropy among feasible ones.  Two
// refinement stages around the best coarse point.
double hstar_by_grid_search(const CostSpec& cost, double lambda_lo,
                            double lambda_hi, int steps) {
  const auto rv = cost.table(cost.support().lo, cost.support().hi,
                             cost.grid_cells());
  const double cw = (cost.support().hi - cost.support().lo) /
                    double(cost.grid_cells());
  auto scan = [&](double lo, double hi, double* best_lam) {
    double best = -1e300;
    for (int s = 0; s <= steps; ++s) {
      const double lam = lo + (hi - lo) * s / steps;
      double z = 0.0;
      for (double r : rv) z += std::exp(lam * r) * cw;
      double mean = 0.0, h = 0.0;
      for (double r : rv) {
        const double p = std::exp(lam * r) / z;
        mean += p * r * cw;
        h -= p * std::log(p) * cw;
      }
      if (mean <= cost.gamma() + 1e-9 && h > best) {
        best = h;
        *best_lam = lam;
      }
    }
    return best;
  };
  double lam = 0.0;
  double best = scan(lambda_lo, lambda_hi, &lam);
  for (int stage = 0; stage < 3; ++stage) {
    const double width = (lambda_hi - lambda_lo) * std::pow(2.0 / steps, stage + 1);
    best = std::max(best, scan(lam - width, lam + width, &lam));
  }
  return best;
}

}  // namespace

TEST(SolveMaxent, QuadraticCostRecoversGaussian) {
  const auto cost = CostSpec::quadratic(1.0, {-10.0, 10.0});
  const auto fstar = solve_maxent(cost);
  // N(0,1): lambda1 = -1/2, h* = (1/2) ln(2 pi e).
  EXPECT_NEAR(fstar.lambda1(), -0.5, 1e-6);
  const auto point = solve_hstar_point(cost);
  EXPECT_NEAR(point.hstar, gaussian_shannon(1.0), 1e-5);
  EXPECT_FALSE(point.pinned_uniform);
}

TEST(SolveMaxent, LinearCostOnHalfLineRecoversExponential) {
  const auto cost = CostSpec::linear(1.0, {0.0, 40.0});
  const auto fstar = solve_maxent(cost);
  EXPECT_NEAR(fstar.lambda1(), -1.0, 1e-5);
  EXPECT_NEAR(fstar.lambda0(), 0.0, 1e-4);
  EXPECT_NEAR(solve_hstar_point(cost).hstar, 1.0, 1e-5);
}

TEST(SolveMaxent, SymmetricBudgetPinsUniform) {
  const auto cost = CostSpec::linear(0.5, {0.0, 1.0});
  const auto point = solve_hstar_point(cost);
  EXPECT_EQ(point.lambda1, 0.0);
  EXPECT_TRUE(point.pinned_uniform);
  EXPECT_NEAR(point.hstar, 0.0, 1e-9);
}

TEST(SolveMaxent, DualityResiduals) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = rng.uniform(0.2, 2.0);
    const double b = rng.uniform(-1.0, 1.0);
    const CostSpec cost([a, b](double x) { return a * x * x + b * x; },
                        {-6.0, 6.0}, rng.uniform(0.3, 3.0), {},
                        std::size_t{1} << 12);
    const auto fstar = solve_maxent(cost);
    const auto grid = fstar.to_grid();
    // Normalisation residual of the raw exponential family (pre-quantise).
    double integral = 0.0;
    const double cw = 12.0 / double(cost.grid_cells());
    for (std::size_t i = 0; i < cost.grid_cells(); ++i) {
      const double x = -6.0 + (double(i) + 0.5) * cw;
      integral += fstar.pdf(x) * cw;
    }
    EXPECT_NEAR(integral, 1.0, 1e-8);
    if (fstar.lambda1() != 0.0)
      EXPECT_NEAR(cost_expectation(grid, cost).value, cost.gamma(), 1e-8);
    else
      EXPECT_LE(cost_expectation(grid, cost).value, cost.gamma() + 1e-8);
  }
}

TEST(SolveMaxent, InfeasibleBudgetThrows) {
  EXPECT_THROW(solve_maxent(CostSpec::quadratic(-1.0, {-5.0, 5.0})),
               InfeasibleError);
}

TEST(SolveMaxent, BracketFailureReported) {
  // Cost values so close together that hitting the budget needs a tilt far
  // beyond the widened bracket limit 2^20.
  std::vector<double> table(16, 0.0);
  for (std::size_t i = 8; i < 16; ++i) table[i] = 1e-9;
  const auto cost = CostSpec::tabulated(table, {0.0, 1.0}, 1e-10);
  EXPECT_THROW(solve_maxent(cost), BracketError);
}

TEST(HstarCurve, QuadraticClosedFormPoints) {
  const auto base = CostSpec::quadratic(1.0, {-12.0, 12.0});
  const auto pts = hstar_curve(base, {0.5, 1.0, 2.0});
  for (const auto& p : pts)
    EXPECT_NEAR(p.hstar, 0.5 * std::log(2.0 * M_PI * M_E * p.gamma), 1e-4);
}

TEST(HstarCurve, RejectsBudgetsBelowDeclaredGammaZero) {
  const auto base = CostSpec::quadratic(1.0, {-10.0, 10.0}, /*gamma0=*/0.5);
  EXPECT_THROW(hstar_curve(base, {0.1, 1.0}), ValidationError);
  EXPECT_NO_THROW(hstar_curve(base, {0.6, 1.0}));
}

TEST(HstarCurve, FiniteSupportSaturatesAtLogVolume) {
  const auto base = CostSpec::linear(0.5, {0.0, 1.0});
  const auto pts = hstar_curve(base, {0.9, 2.0, 100.0});
  for (const auto& p : pts) {
    EXPECT_TRUE(p.pinned_uniform);
    EXPECT_NEAR(p.hstar, 0.0, 1e-9);  // ln |S| = ln 1
  }
}

TEST(HstarCurve, LinearCostCurveVsGridSearchOracle) {
  const auto base =
      CostSpec::linear(0.1, {0.0, 1.0}, {}, std::size_t{1} << 10);
  const std::vector<double> gammas = {0.1, 0.2, 0.3, 0.4, 0.5};
  const auto pts = hstar_curve(base, gammas);
  EXPECT_TRUE(curve_is_monotone_concave(pts));
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const double oracle =
        hstar_by_grid_search(base.with_gamma(gammas[i]), -40.0, 5.0, 2500);
    EXPECT_NEAR(pts[i].hstar, oracle, 1e-5) << "gamma=" << gammas[i];
  }
}

TEST(HstarCurve, MonotoneAndConcaveOnRandomCostFamilies) {
  Rng rng(77);
  for (int trial = 0; trial < 8; ++trial) {
    const double a = rng.uniform(0.3, 1.5);
    const double b = rng.uniform(-0.5, 0.5);
    const CostSpec base([a, b](double x) { return a * x * x + b * x; },
                        {-5.0, 5.0}, 1.0, {}, std::size_t{1} << 11);
    std::vector<double> gammas;
    double g = rng.uniform(0.15, 0.3);
    for (int i = 0; i < 9; ++i) {
      gammas.push_back(g);
      g += rng.uniform(0.1, 0.6);
    }
    const auto pts = hstar_curve(base, gammas);
    for (std::size_t i = 1; i < pts.size(); ++i)
      EXPECT_GE(pts[i].hstar, pts[i - 1].hstar - 1e-9);
    EXPECT_TRUE(curve_is_monotone_concave(pts));
  }
}

TEST(SolveMaxent, OptimalityAgainst200Perturbations) {
  const auto cost =
      CostSpec::quadratic(1.0, {-8.0, 8.0}, {}, std::size_t{1} << 10);
  const auto fstar = solve_maxent(cost);
  const auto fgrid = fstar.to_grid();
  const double hstar = shannon_entropy(fgrid).nats;
  const auto rv = cost.table(fgrid);
  // Cheapest cell anchors the feasibility blend.
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < rv.size(); ++i)
    if (rv[i] < rv[argmin]) argmin = i;
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(fgrid.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] = fgrid.value(i) * rng.uniform(0.2, 1.8);
    GridDensity g = GridDensity::normalized(fgrid.lo(), fgrid.hi(), w);
    double cg = cost_expectation(g, cost).value;
    if (cg > cost.gamma()) {
      // Blend toward the min-cost cell until the budget holds.
      std::vector<double> cheap(fgrid.size(), 0.0);
      cheap[argmin] = 1.0;
      const GridDensity anchor =
          GridDensity::normalized(fgrid.lo(), fgrid.hi(), cheap);
      const double ca = cost_expectation(anchor, cost).value;
      const double t = (cg - cost.gamma()) / (cg - ca) + 1e-6;
      std::vector<double> blend(fgrid.size());
      for (std::size_t i = 0; i < blend.size(); ++i)
        blend[i] = (1.0 - t) * g.value(i) + t * anchor.value(i);
      g = GridDensity::normalized(fgrid.lo(), fgrid.hi(), blend);
      cg = cost_expectation(g, cost).value;
    }
    ASSERT_LE(cg, cost.gamma() + 1e-9);
    EXPECT_LE(shannon_entropy(g).nats, hstar + 1e-6);
  }
}

TEST(FineLineGap, MaximizerHasZeroGap) {
  const auto cost = CostSpec::quadratic(1.0, {-10.0, 10.0});
  const auto fz = solve_maxent(cost).to_grid();
  const auto out = fine_line_gap(fz, cost);
  EXPECT_NEAR(out.gap, 0.0, 1e-10);
  EXPECT_NEAR(out.hstar, gaussian_shannon(1.0), 1e-5);
}

TEST(FineLineGap, QuantizedGaussianNearZeroGap) {
  const auto cost = CostSpec::quadratic(1.0, {-10.0, 10.0});
  const auto fz = quantize(Parametric::gaussian(0.0, 1.0), -10.0, 10.0,
                           std::size_t{1} << 14, 1e-9);
  const auto out = fine_line_gap(fz, cost);
  EXPECT_NEAR(out.gap, 0.0, 1e-6);
}

TEST(FineLineGap, UnitVarianceUniformAgainstQuadraticMaximizer) {
  const double s = std::sqrt(3.0);
  const auto cost =
      CostSpec::quadratic(1.0, {-10.0, 10.0}, {}, std::size_t{1} << 14);
  const auto fz = GridDensity::uniform(-s, s, std::size_t{1} << 14);
  const auto out = fine_line_gap(fz, cost);
  // Budget is tight, so gap = h* - h(f_Z) = (1/2) ln(2 pi e) - ln(2 sqrt 3).
  const double expected = gaussian_shannon(1.0) - std::log(2.0 * s);
  EXPECT_NEAR(expected, 0.17648520831067249, 1e-12);
  EXPECT_NEAR(out.gap, expected, 1e-4);
  EXPECT_NEAR(out.hstar - out.gap, std::log(2.0 * s), 1e-4);
}

TEST(FineLineGap, RejectsBudgetViolation) {
  const auto cost = CostSpec::quadratic(1.0, {-10.0, 10.0});
  const auto fz = GridDensity::uniform(-1.0, 1.0, 1 << 10);  // E[x^2] = 1/3
  EXPECT_THROW(fine_line_gap(fz, cost), ValidationError);
}
