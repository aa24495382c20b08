#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "renyi/entropy.hpp"
#include "renyi/errors.hpp"
#include "renyi/grid_density.hpp"
#include "renyi/rng.hpp"
#include "renyi/typicality.hpp"

namespace renyi {

// Finite mixture of grid densities on one shared grid.
struct MixtureSpec {
  std::vector<GridDensity> components;
  std::vector<double> weights;

  MixtureSpec(std::vector<GridDensity> comps, std::vector<double> ws)
      : components(std::move(comps)), weights(std::move(ws)) {
    if (components.empty())
      throw ValidationError("MixtureSpec: at least one component");
    if (components.size() != weights.size())
      throw ValidationError("MixtureSpec: weights/components mismatch");
    double s = 0.0;
    for (double q : weights) {
      if (!(q >= 0.0)) throw ValidationError("MixtureSpec: weights >= 0");
      s += q;
    }
    if (std::abs(s - 1.0) > 1e-12)
      throw ValidationError("MixtureSpec: weights must sum to 1");
    for (std::size_t i = 1; i < components.size(); ++i)
      if (!components[i].same_grid(components[0]))
        throw ValidationError("MixtureSpec: components must share one grid");
  }

  GridDensity to_grid_density() const {
    std::vector<double> w(components[0].size(), 0.0);
    for (std::size_t ell = 0; ell < components.size(); ++ell)
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] += weights[ell] * components[ell].value(i);
    return GridDensity::normalized(components[0].lo(), components[0].hi(),
                                   std::move(w));
  }
};

// Rebuilds densities with heterogeneous supports on one shared covering
// grid.  Aligned grids (equal cell width, integral offsets) embed exactly;
// anything else is midpoint-resampled at four times the finest resolution
// and renormalised.
inline std::vector<GridDensity> embed_on_common_grid(
    const std::vector<GridDensity>& fs) {
  if (fs.empty()) throw ValidationError("embed_on_common_grid: empty input");
  double lo = fs[0].lo(), hi = fs[0].hi(), cw = fs[0].cell_width();
  bool aligned = true;
  for (const auto& f : fs) {
    lo = std::min(lo, f.lo());
    hi = std::max(hi, f.hi());
    cw = std::min(cw, f.cell_width());
  }
  for (const auto& f : fs) {
    const double ratio = f.cell_width() / cw;
    const double offset = (f.lo() - lo) / cw;
    aligned = aligned && std::abs(ratio - std::round(ratio)) < 1e-9 &&
              std::abs(offset - std::round(offset)) < 1e-9;
  }
  const double step = aligned ? cw : cw / 4.0;
  const auto cells = std::size_t(std::ceil((hi - lo) / step - 1e-9));
  std::vector<GridDensity> out;
  for (const auto& f : fs) {
    std::vector<double> w(cells, 0.0);
    for (std::size_t i = 0; i < cells; ++i)
      w[i] = f.value_at(lo + (double(i) + 0.5) * (hi - lo) / double(cells));
    out.push_back(GridDensity::normalized(lo, hi, std::move(w)));
  }
  return out;
}

// Entropy of the mixture density itself; alpha == 1 gives Shannon.
inline EntropyValue mixture_entropy(const MixtureSpec& m, double alpha) {
  const GridDensity f = m.to_grid_density();
  if (alpha == 1.0) return shannon_entropy(f);
  return renyi_entropy(f, alpha);
}

// h_alpha(mixture) >= min_ell h_alpha(component).
inline double mixture_lower_bound(const MixtureSpec& m, double alpha) {
  double lo = kInf;
  for (const auto& f : m.components)
    lo = std::min(lo, renyi_entropy(f, alpha).nats);
  return lo;
}

// alpha > 1:  min_ell { alpha/(1-alpha) ln q_ell + h_alpha(f_ell) },
//             components with q_ell = 0 are skipped (their bound is +inf);
// alpha < 1:  1/(1-alpha) ln p + max_ell h_alpha(f_ell).
inline double mixture_upper_bound(const MixtureSpec& m, double alpha) {
  if (alpha == 1.0)
    throw ValidationError("mixture_upper_bound: alpha != 1 required");
  if (alpha > 1.0) {
    double ub = kInf;
    for (std::size_t ell = 0; ell < m.components.size(); ++ell) {
      if (m.weights[ell] == 0.0) continue;
      ub = std::min(ub, alpha / (1.0 - alpha) * std::log(m.weights[ell]) +
                            renyi_entropy(m.components[ell], alpha).nats);
    }
    return ub;
  }
  double hmax = -kInf;
  for (const auto& f : m.components)
    hmax = std::max(hmax, renyi_entropy(f, alpha).nats);
  return std::log(double(m.components.size())) / (1.0 - alpha) + hmax;
}

// Exact order-alpha entropy of (1-delta) Unif(S0) + delta Unif(S1) for
// disjoint S0, S1 of Lebesgue volumes V0, V1, in log domain:
//   1/(1-alpha) ln( (1-delta)^alpha V0^{1-alpha} + delta^alpha V1^{1-alpha} ).
inline double disjoint_two_set_entropy_log(double log_v0, double log_v1,
                                           double delta, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0)
    throw ValidationError("disjoint_two_set_entropy: alpha > 0, != 1");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw ValidationError("disjoint_two_set_entropy: delta in [0,1]");
  if (delta == 0.0) return log_v0;
  if (delta == 1.0) return log_v1;
  const double t0 = alpha * std::log1p(-delta) + (1.0 - alpha) * log_v0;
  const double t1 = alpha * std::log(delta) + (1.0 - alpha) * log_v1;
  const double mx = std::max(t0, t1);
  return (mx + std::log(std::exp(t0 - mx) + std::exp(t1 - mx))) /
         (1.0 - alpha);
}

inline double disjoint_two_set_entropy(double v0, double v1, double delta,
                                       double alpha) {
  if (!(v0 > 0.0) || !(v1 > 0.0))
    throw ValidationError("disjoint_two_set_entropy: volumes > 0 required");
  return disjoint_two_set_entropy_log(std::log(v0), std::log(v1), delta,
                                      alpha);
}

// Mixture (1-delta) Unif(S_0) + delta Unif(S_1) of two typical-set blocks
// of common length n.  Disjointness of S_0 and S_1 is certified through the
// cost bands: every S_0 tuple has mean cost below band0_hi and every S_1
// tuple has mean cost above band1_lo, so band0_hi <= band1_lo separates the
// sets.  No geometric test is run.
class TwoSetBlockMixture {
 public:
  struct Certs {
    double band0_hi;       // E_{f0}[r] + eps0
    double band1_lo;       // E_{f1}[r] - eps1
    double percoord_cost;  // exact E[r(X_k)] (midpoint semantics)
    double gamma;          // budget the per-coordinate cost was checked with
  };

  TwoSetBlockMixture(TypicalBlockDensity s0, TypicalBlockDensity s1,
                     double delta, double gamma)
      : s0_(std::move(s0)), s1_(std::move(s1)), delta_(delta) {
    if (s0_.spec().n != s1_.spec().n)
      throw ValidationError("TwoSetBlockMixture: block lengths differ");
    if (!(delta_ >= 0.0 && delta_ <= 1.0))
      throw ValidationError("TwoSetBlockMixture: delta in [0,1]");
    certs_.band0_hi = s0_.spec().er + s0_.spec().eps;
    certs_.band1_lo = s1_.spec().er - s1_.spec().eps;
    if (!(certs_.band0_hi <= certs_.band1_lo))
      throw ConstructionError(
          "TwoSetBlockMixture: cost bands overlap, disjointness unprovable");
    certs_.percoord_cost = (1.0 - delta_) * s0_.percoord_cost() +
                           delta_ * s1_.percoord_cost();
    certs_.gamma = gamma;
  }

  int n() const { return s0_.spec().n; }
  double delta() const { return delta_; }
  const TypicalBlockDensity& s0() const { return s0_; }
  const TypicalBlockDensity& s1() const { return s1_; }
  const Certs& certs() const { return certs_; }

  double entropy(double alpha) const {
    return disjoint_two_set_entropy_log(s0_.log_volume(), s1_.log_volume(),
                                        delta_, alpha);
  }

  // Exact per-coordinate moments (mixtures of the component moments).
  double percoord_mean() const {
    return (1.0 - delta_) * s0_.percoord_mean() + delta_ * s1_.percoord_mean();
  }
  double percoord_second_moment() const {
    return (1.0 - delta_) * s0_.percoord_second_moment() +
           delta_ * s1_.percoord_second_moment();
  }

  std::vector<double> sample(Rng& rng) const {
    return rng.uniform01() < delta_ ? s1_.sample(rng) : s0_.sample(rng);
  }

 private:
  TypicalBlockDensity s0_, s1_;
  double delta_;
  Certs certs_;
};

// Builds the two-set mixture used by the alpha < 1 constructions, checking
// the band preconditions
//   gamma0 + eps < gamma < gamma1 - eps
//   (1-delta)(gamma0 + eps) + delta (gamma1 + eps) <= gamma
// which guarantee both disjointness and the per-coordinate budget.
inline TwoSetBlockMixture build_alpha_small_block(
    const GridDensity& f0, const GridDensity& f1, double gamma0, double gamma1,
    const CostSpec& cost, double eps, double delta, int n,
    BlockBuildOptions opts = {}) {
  const double gamma = cost.gamma();
  if (!(gamma0 + eps < gamma && gamma < gamma1 - eps))
    throw ValidationError(
        "build_alpha_small_block: need gamma0 + eps < gamma < gamma1 - eps");
  if (!((1.0 - delta) * (gamma0 + eps) + delta * (gamma1 + eps) <= gamma))
    throw ValidationError(
        "build_alpha_small_block: mixture budget precondition fails");
  const auto e0 = cost_expectation(f0, cost).value;
  const auto e1 = cost_expectation(f1, cost).value;
  if (e0 > gamma0 + 1e-12 || e1 > gamma1 + 1e-12)
    throw ValidationError(
        "build_alpha_small_block: component costs exceed their gammas");
  auto s0 = TypicalBlockDensity::build(TypicalSpec(f0, n, eps, cost), opts);
  auto s1 = TypicalBlockDensity::build(TypicalSpec(f1, n, eps, cost), opts);
  TwoSetBlockMixture mix(std::move(s0), std::move(s1), delta, gamma);
  if (mix.certs().percoord_cost > gamma + 1e-12)
    throw ConstructionError(
        "build_alpha_small_block: per-coordinate cost exceeds gamma");
  return mix;
}

}  // namespace renyi
