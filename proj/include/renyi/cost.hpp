#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "renyi/errors.hpp"
#include "renyi/grid_density.hpp"

namespace renyi {

struct Interval {
  double lo;
  double hi;
};

// A cost function r together with a (possibly truncated) support interval,
// a budget Gamma and an optional feasibility floor Gamma_0.  Unbounded
// supports are represented by their truncation interval; the truncation is
// the domain as far as all numerics are concerned.
class CostSpec {
 public:
  using Fn = std::function<double(double)>;

  static constexpr std::size_t kDefaultCells = std::size_t{1} << 14;

  CostSpec(Fn r, Interval support, double gamma,
           std::optional<double> gamma0 = std::nullopt,
           std::size_t grid_cells = kDefaultCells, std::string name = "custom")
      : r_(std::make_shared<Fn>(std::move(r))),
        support_(support),
        gamma_(gamma),
        gamma0_(gamma0),
        grid_cells_(grid_cells),
        name_(std::move(name)) {
    if (!(support_.lo < support_.hi))
      throw ValidationError("CostSpec: support lo < hi required");
    if (grid_cells_ < 1) throw ValidationError("CostSpec: grid_cells >= 1");
    // r must be finite on every grid point of the support discretisation.
    const double cw = (support_.hi - support_.lo) / double(grid_cells_);
    for (std::size_t i = 0; i < grid_cells_; ++i) {
      const double x = support_.lo + (double(i) + 0.5) * cw;
      if (!std::isfinite((*r_)(x)))
        throw ValidationError("CostSpec: r not finite at grid point " +
                              std::to_string(x));
    }
  }

  double r(double x) const { return (*r_)(x); }
  const Interval& support() const { return support_; }
  double gamma() const { return gamma_; }
  std::optional<double> gamma0() const { return gamma0_; }
  std::size_t grid_cells() const { return grid_cells_; }
  const std::string& name() const { return name_; }

  CostSpec with_gamma(double g) const {
    CostSpec c(*this);
    c.gamma_ = g;
    return c;
  }

  // Cost values at the midpoints of an arbitrary grid.
  std::vector<double> table(double lo, double hi, std::size_t cells) const {
    std::vector<double> out(cells);
    const double cw = (hi - lo) / double(cells);
    for (std::size_t i = 0; i < cells; ++i)
      out[i] = (*r_)(lo + (double(i) + 0.5) * cw);
    return out;
  }

  std::vector<double> table(const GridDensity& f) const {
    return table(f.lo(), f.hi(), f.size());
  }

  static CostSpec quadratic(double gamma, Interval support = {-10.0, 10.0},
                            std::optional<double> gamma0 = std::nullopt,
                            std::size_t cells = kDefaultCells) {
    return CostSpec([](double x) { return x * x; }, support, gamma, gamma0,
                    cells, "quadratic");
  }

  static CostSpec linear(double gamma, Interval support,
                         std::optional<double> gamma0 = std::nullopt,
                         std::size_t cells = kDefaultCells) {
    return CostSpec([](double x) { return x; }, support, gamma, gamma0, cells,
                    "linear");
  }

  // Step-constant cost from per-cell values over the support.
  static CostSpec tabulated(std::vector<double> values, Interval support,
                            double gamma,
                            std::optional<double> gamma0 = std::nullopt) {
    if (values.empty()) throw ValidationError("tabulated: empty table");
    auto vals = std::make_shared<std::vector<double>>(std::move(values));
    const double lo = support.lo, hi = support.hi;
    const std::size_t n = vals->size();
    auto fn = [vals, lo, hi, n](double x) -> double {
      if (x < lo || x > hi) return (*vals)[x < lo ? 0 : n - 1];
      auto idx = static_cast<std::size_t>((x - lo) / ((hi - lo) / double(n)));
      return (*vals)[std::min(idx, n - 1)];
    };
    return CostSpec(std::move(fn), support, gamma, gamma0, n, "tabulated");
  }

 private:
  std::shared_ptr<Fn> r_;
  Interval support_;
  double gamma_;
  std::optional<double> gamma0_;
  std::size_t grid_cells_;
  std::string name_;
};

}  // namespace renyi
