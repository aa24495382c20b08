#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "renyi/cost.hpp"
#include "renyi/entropy.hpp"
#include "renyi/errors.hpp"
#include "renyi/grid_density.hpp"

namespace renyi {

struct TruncationReport {
  double M;
  double beta;  // normaliser: integral of f ^ M
  double cost_before;
  double cost_after;
  double h_before;
  double h_after;
};

// Caps f at level M and renormalises: f~ = (f ^ M) / beta.  The output is
// bounded by M / beta and keeps (or shrinks) the support.
inline std::pair<GridDensity, TruncationReport> truncate_bound(
    const GridDensity& f, const CostSpec& cost, double M) {
  if (!(M >= 1.0)) throw ValidationError("truncate_bound: M >= 1 required");
  std::vector<double> capped(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    capped[i] = std::min(f.value(i), M);
  const double beta = compensated_sum(capped) * f.cell_width();
  if (!(beta > 0.0)) throw Error("truncate_bound: beta = 0");
  TruncationReport rep;
  rep.M = M;
  rep.beta = beta;
  rep.cost_before = cost_expectation(f, cost).value;
  rep.h_before = shannon_entropy(f).nats;
  for (double& w : capped) w /= beta;
  GridDensity out(f.lo(), f.hi(), std::move(capped));
  rep.cost_after = cost_expectation(out, cost).value;
  rep.h_after = shannon_entropy(out).nats;
  return {std::move(out), rep};
}

// Smallest power-of-two M >= 1 with
//   integral (f ^ M)        > 1 - eps   and
//   integral (f - f ^ M)|r| < eps.
// Always terminates: both hold once M >= max f.
inline double pick_M(const GridDensity& f, const CostSpec& cost, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("pick_M: eps in (0,1) required");
  const auto rv = cost.table(f);
  for (double M = 1.0;; M *= 2.0) {
    double captured = 0.0, excess_cost = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double w = f.value(i);
      const double c = std::min(w, M);
      captured += c;
      excess_cost += (w - c) * std::abs(rv[i]);
    }
    captured *= f.cell_width();
    excess_cost *= f.cell_width();
    if (captured > 1.0 - eps && excess_cost < eps) return M;
  }
}

struct RestrictionReport {
  double k;
  double beta;      // mass of f on D_k
  double h;         // h(f restricted to D_k)
  double cost;      // integral f~ r
  double abs_cost;  // integral f~ |r|
};

// Restricts f to D_k = {x : r^-(x) <= k} and renormalises, where
// r^- = max(-r, 0).  Cells outside D_k are zeroed on the same grid.
inline std::pair<GridDensity, RestrictionReport> restrict_domain(
    const GridDensity& f, const CostSpec& cost, double k) {
  const auto rv = cost.table(f);
  std::vector<double> w(f.size(), 0.0);
  double beta = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double rminus = std::max(-rv[i], 0.0);
    if (rminus <= k) {
      w[i] = f.value(i);
      beta += f.mass(i);
    }
  }
  if (!(beta > 0.0))
    throw ConstructionError("restrict_domain: D_k carries no mass on grid");
  GridDensity out = GridDensity::normalized(f.lo(), f.hi(), std::move(w));
  const auto ce = cost_expectation(out, cost);
  return {out, RestrictionReport{k, beta, shannon_entropy(out).nats, ce.value,
                                 ce.abs_value}};
}

struct BoundedApproachReport {
  double delta;
  double eps;  // chosen from delta by the recipe below
  double M;
  TruncationReport truncation;
};

// Produces a bounded density with cost <= Gamma + delta and entropy
// >= h(f) - delta.  eps is shrunk until both guarantees
//   cost:     eps/(1-eps) (|Gamma| + 1)        <= delta
//   entropy:  -ln(1-eps) + eps/(1-eps) |h(f)|  <= delta
// are implied, then M comes from pick_M.  On a finite grid the domain
// restriction step is a no-op (integral f |r| is always finite), so the
// pipeline reduces to restrict-with-full-k followed by the cap.
inline std::pair<GridDensity, BoundedApproachReport> bounded_approach(
    const GridDensity& f, const CostSpec& cost, double delta) {
  if (!(delta > 0.0)) throw ValidationError("bounded_approach: delta > 0");
  const auto rv = cost.table(f);
  double kmax = 0.0;
  for (double r : rv) kmax = std::max(kmax, std::max(-r, 0.0));
  auto [restricted, rrep] = restrict_domain(f, cost, kmax);

  const double gamma = cost.gamma();
  const double h = shannon_entropy(restricted).nats;
  double eps = 0.5;
  while (eps / (1.0 - eps) * (std::abs(gamma) + 1.0) > delta ||
         -std::log(1.0 - eps) + eps / (1.0 - eps) * std::abs(h) > delta) {
    eps *= 0.5;
    if (eps < 1e-300) throw Error("bounded_approach: eps underflow");
  }
  const double M = pick_M(restricted, cost, eps);
  auto [bounded, trep] = truncate_bound(restricted, cost, M);
  return {std::move(bounded), BoundedApproachReport{delta, eps, M, trep}};
}

}  // namespace renyi
