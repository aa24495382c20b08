#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "renyi/cost.hpp"
#include "renyi/entropy.hpp"
#include "renyi/errors.hpp"
#include "renyi/grid_density.hpp"

namespace renyi {

// f*(x) = exp(lambda0 + lambda1 r(x)) on the support of `cost`.
// Construction checks that the density integrates to one by quadrature.
class ExpFamilyDensity {
 public:
  ExpFamilyDensity(double lambda0, double lambda1, CostSpec cost)
      : lambda0_(lambda0), lambda1_(lambda1), cost_(std::move(cost)) {
    const auto rv = cost_.table(cost_.support().lo, cost_.support().hi,
                                cost_.grid_cells());
    const double cw = (cost_.support().hi - cost_.support().lo) /
                      double(cost_.grid_cells());
    double integral = 0.0;
    for (double r : rv) integral += std::exp(lambda0_ + lambda1_ * r);
    integral *= cw;
    if (std::abs(integral - 1.0) > 1e-8)
      throw ValidationError("ExpFamilyDensity: integral " +
                            std::to_string(integral) + " != 1");
  }

  double lambda0() const { return lambda0_; }
  double lambda1() const { return lambda1_; }
  const CostSpec& cost() const { return cost_; }

  double pdf(double x) const {
    if (x < cost_.support().lo || x > cost_.support().hi) return 0.0;
    return std::exp(lambda0_ + lambda1_ * cost_.r(x));
  }

  // Quantised view on an arbitrary grid inside the support.
  GridDensity to_grid(double lo, double hi, std::size_t cells) const {
    std::vector<double> w(cells);
    const double cw = (hi - lo) / double(cells);
    for (std::size_t i = 0; i < cells; ++i)
      w[i] = pdf(lo + (double(i) + 0.5) * cw);
    return GridDensity::normalized(lo, hi, std::move(w));
  }

  GridDensity to_grid() const {
    return to_grid(cost_.support().lo, cost_.support().hi,
                   cost_.grid_cells());
  }

 private:
  double lambda0_, lambda1_;
  CostSpec cost_;
};

namespace detail {

// Mean of r under the tilted density exp(lambda1 * r) (log-sum-exp form).
inline double tilted_mean(std::span<const double> rv, double lambda1) {
  double m = -kInf;
  for (double r : rv) m = std::max(m, lambda1 * r);
  double z = 0.0, zr = 0.0;
  for (double r : rv) {
    const double e = std::exp(lambda1 * r - m);
    z += e;
    zr += e * r;
  }
  return zr / z;
}

inline double log_partition(std::span<const double> rv, double lambda1,
                            double cell_width) {
  double m = -kInf;
  for (double r : rv) m = std::max(m, lambda1 * r);
  double z = 0.0;
  for (double r : rv) z += std::exp(lambda1 * r - m);
  return m + std::log(z) + std::log(cell_width);
}

}  // namespace detail

struct HStarPoint {
  double gamma;
  double hstar;
  double lambda0;
  double lambda1;
  bool pinned_uniform;  // constraint slack; maximiser is uniform on S
};

// Solves sup h(f) over densities on S with E[r] <= Gamma.
//
// The dual map lambda1 -> E_{lambda1}[r] is monotone, so the binding case is
// a bisection.  When the uniform density on S already satisfies the budget
// the constraint is slack and lambda1 is pinned to 0; this subsumes the
// finite-support case where Gamma exceeds the grid maximum of r, for which
// the dual map saturates and bisection would stall.
inline ExpFamilyDensity solve_maxent(const CostSpec& cost) {
  const Interval s = cost.support();
  const std::size_t cells = cost.grid_cells();
  const double cw = (s.hi - s.lo) / double(cells);
  const auto rv = cost.table(s.lo, s.hi, cells);
  const double gamma = cost.gamma();

  double rmin = kInf;
  for (double r : rv) rmin = std::min(rmin, r);
  if (!(gamma > rmin))
    throw InfeasibleError("solve_maxent: Gamma <= inf r over S");

  double lambda1 = 0.0;
  if (detail::tilted_mean(rv, 0.0) > gamma) {
    // Binding constraint: bracket the root of E_{lambda1}[r] - Gamma.
    double lo = -64.0, hi = 64.0;
    const double limit = std::pow(2.0, 20);
    while (detail::tilted_mean(rv, lo) > gamma) {
      lo *= 2.0;
      if (lo < -limit)
        throw BracketError("solve_maxent: no bracket for lambda1 down to -2^20");
    }
    while (detail::tilted_mean(rv, hi) < gamma) {
      hi *= 2.0;
      if (hi > limit)
        throw BracketError("solve_maxent: no bracket for lambda1 up to 2^20");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (detail::tilted_mean(rv, mid) < gamma) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (std::abs(detail::tilted_mean(rv, 0.5 * (lo + hi)) - gamma) < 1e-14)
        break;
    }
    lambda1 = 0.5 * (lo + hi);
  }
  const double lambda0 = -detail::log_partition(rv, lambda1, cw);
  return ExpFamilyDensity(lambda0, lambda1, cost);
}

inline HStarPoint solve_hstar_point(const CostSpec& cost) {
  const ExpFamilyDensity fstar = solve_maxent(cost);
  const GridDensity g = fstar.to_grid();
  HStarPoint p;
  p.gamma = cost.gamma();
  p.hstar = shannon_entropy(g).nats;
  p.lambda0 = fstar.lambda0();
  p.lambda1 = fstar.lambda1();
  p.pinned_uniform = (fstar.lambda1() == 0.0);
  return p;
}

inline std::vector<HStarPoint> hstar_curve(const CostSpec& base,
                                           const std::vector<double>& gammas) {
  if (base.gamma0()) {
    for (double g : gammas)
      if (g < *base.gamma0())
        throw ValidationError("hstar_curve: budget below the declared Gamma_0");
  }
  std::vector<HStarPoint> out;
  out.reserve(gammas.size());
  for (double g : gammas) out.push_back(solve_hstar_point(base.with_gamma(g)));
  return out;
}

// True iff the curve is nondecreasing and midpoint-concave within tol.
inline bool curve_is_monotone_concave(const std::vector<HStarPoint>& pts,
                                      double tol = 1e-6) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].hstar < pts[i - 1].hstar - 1e-9) return false;
  for (std::size_t i = 2; i < pts.size(); ++i) {
    // Points need not be equally spaced; test chord-midpoint concavity on
    // consecutive triples via linear interpolation.
    const auto& a = pts[i - 2];
    const auto& b = pts[i - 1];
    const auto& c = pts[i];
    const double t = (b.gamma - a.gamma) / (c.gamma - a.gamma);
    const double chord = (1.0 - t) * a.hstar + t * c.hstar;
    if (b.hstar < chord - tol) return false;
  }
  return true;
}

struct FineLineGap {
  double hstar;
  double gap;  // D(f_Z || f*); the implied Renyi-rate bound is hstar - gap
};

// Quantifies how far a marginal density with E[r] = Gamma sits below the
// ceiling h*(Gamma): any stationary process with this marginal has
// order-alpha rate at most hstar - gap for alpha > 1.
inline FineLineGap fine_line_gap(const GridDensity& fz, const CostSpec& cost) {
  const double efz = cost_expectation(fz, cost).value;
  if (std::abs(efz - cost.gamma()) > 1e-6)
    throw ValidationError("fine_line_gap: E[r] under f_Z must equal Gamma");
  const ExpFamilyDensity fstar = solve_maxent(cost);
  // D(f_Z || f*) against the true maximiser values on f_Z's grid; f_Z may
  // occupy only part of S, so f* must not be renormalised over that part.
  double gap = 0.0;
  for (std::size_t i = 0; i < fz.size(); ++i) {
    const double g = fz.value(i);
    if (g == 0.0) continue;
    const double fs = fstar.pdf(fz.midpoint(i));
    if (fs == 0.0) {
      gap = kInf;
      break;
    }
    gap += g * std::log(g / fs) * fz.cell_width();
  }
  FineLineGap out;
  out.hstar = shannon_entropy(fstar.to_grid()).nats;
  out.gap = gap;
  return out;
}

}  // namespace renyi
