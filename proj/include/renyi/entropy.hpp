#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "renyi/cost.hpp"
#include "renyi/errors.hpp"
#include "renyi/grid_density.hpp"

namespace renyi {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// An entropy in nats tagged with its order; alpha == 1 encodes Shannon.
// Orders below one can never be -inf and orders above one can never be
// +inf, so those combinations are rejected.
struct EntropyValue {
  double nats;
  double alpha;

  EntropyValue(double nats_, double alpha_) : nats(nats_), alpha(alpha_) {
    if (nats == 0.0) nats = 0.0;  // canonicalise -0.0 for stable reports
    if (!(alpha > 0.0)) throw ValidationError("EntropyValue: alpha > 0");
    if (alpha < 1.0 && nats == -kInf)
      throw ValidationError("EntropyValue: order < 1 cannot be -inf");
    if (alpha > 1.0 && nats == kInf)
      throw ValidationError("EntropyValue: order > 1 cannot be +inf");
  }
};

// Order-alpha Renyi entropy 1/(1-alpha) * ln integral f^alpha, midpoint rule.
// Zero-weight cells contribute nothing.
inline EntropyValue renyi_entropy(const GridDensity& f, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0)
    throw ValidationError("renyi_entropy: alpha > 0 and != 1 required");
  const double wmax = f.max_value();
  double sum = 0.0;
  for (double w : f.values()) {
    if (w > 0.0) sum += std::pow(w / wmax, alpha);
  }
  sum *= f.cell_width();
  const double log_integral = alpha * std::log(wmax) + std::log(sum);
  return EntropyValue(log_integral / (1.0 - alpha), alpha);
}

// Shannon entropy -integral f ln f with the 0 ln 0 := 0 convention.
inline EntropyValue shannon_entropy(const GridDensity& f) {
  double acc = 0.0;
  for (double w : f.values()) {
    if (w > 0.0) acc -= w * std::log(w);
  }
  return EntropyValue(acc * f.cell_width(), 1.0);
}

struct CostExpectation {
  double value;      // integral f r
  double abs_value;  // integral f |r|, for integrability checks
};

inline CostExpectation cost_expectation(const GridDensity& f,
                                        const CostSpec& cost) {
  double v = 0.0, a = 0.0;
  const auto rv = cost.table(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m = f.mass(i);
    v += m * rv[i];
    a += m * std::abs(rv[i]);
  }
  return {v, a};
}

// Relative entropy D(g || fstar) on a shared grid; +inf as soon as g puts
// mass where fstar does not.
inline double kl_divergence(const GridDensity& g, const GridDensity& fstar) {
  if (!g.same_grid(fstar))
    throw ValidationError("kl_divergence: densities must share one grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double gi = g.value(i), fi = fstar.value(i);
    if (gi == 0.0) continue;
    if (fi == 0.0) return kInf;
    acc += gi * std::log(gi / fi);
  }
  return acc * g.cell_width();
}

// Closed forms used as oracles for the quadrature path.
inline double gaussian_shannon(double sigma) {
  return 0.5 * std::log(2.0 * M_PI * M_E * sigma * sigma);
}

inline double gaussian_renyi(double sigma, double alpha) {
  return 0.5 * std::log(2.0 * M_PI * sigma * sigma) +
         std::log(alpha) / (2.0 * (alpha - 1.0));
}

// Shannon rate of the Gauss-Markov process with innovation variance sigma2.
inline double gauss_markov_shannon_rate(double sigma2) {
  if (!(sigma2 > 0.0))
    throw ValidationError("gauss_markov_shannon_rate: sigma2 > 0 required");
  return 0.5 * std::log(2.0 * M_PI * M_E * sigma2);
}

}  // namespace renyi
