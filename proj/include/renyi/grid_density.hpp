#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "renyi/errors.hpp"

namespace renyi {

// Compensated (Neumaier) summation; the normalisation invariant is checked
// at 1e-12 and a naive sum over 2^14 cells can drift past that.
inline double compensated_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  return s + c;
}

// A nonnegative, normalised weight vector over a uniform 1-D grid on
// [lo, hi].  weights[i] is the density value on cell i (cell mass divided
// by the cell width).  This is the universal numeric density representation;
// everything downstream integrates it with the midpoint rule.
class GridDensity {
 public:
  GridDensity(double lo, double hi, std::vector<double> weights)
      : lo_(lo), hi_(hi), weights_(std::move(weights)) {
    if (!(lo_ < hi_)) throw ValidationError("GridDensity: requires lo < hi");
    if (weights_.empty()) throw ValidationError("GridDensity: empty grid");
    cell_width_ = (hi_ - lo_) / static_cast<double>(weights_.size());
    double mass = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw ValidationError("GridDensity: weights must be finite and >= 0");
    }
    mass = compensated_sum(weights_) * cell_width_;
    if (std::abs(mass - 1.0) > 1e-12)
      throw ValidationError("GridDensity: not normalised, integral = " +
                            std::to_string(mass));
  }

  // Normalises an arbitrary nonnegative weight vector.
  static GridDensity normalized(double lo, double hi,
                                std::vector<double> weights) {
    if (!(lo < hi)) throw ValidationError("GridDensity: requires lo < hi");
    if (weights.empty()) throw ValidationError("GridDensity: empty grid");
    for (double w : weights)
      if (!(w >= 0.0) || !std::isfinite(w))
        throw ValidationError("GridDensity: weights must be finite and >= 0");
    const double cw = (hi - lo) / static_cast<double>(weights.size());
    const double total = compensated_sum(weights) * cw;
    if (!(total > 0.0))
      throw ValidationError("GridDensity: zero total mass");
    for (double& w : weights) w /= total;
    return GridDensity(lo, hi, std::move(weights));
  }

  static GridDensity uniform(double lo, double hi, std::size_t cells) {
    return GridDensity(lo, hi,
                       std::vector<double>(cells, 1.0 / (hi - lo)));
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double cell_width() const { return cell_width_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> values() const { return weights_; }
  double value(std::size_t cell) const { return weights_[cell]; }
  double mass(std::size_t cell) const { return weights_[cell] * cell_width_; }

  double midpoint(std::size_t cell) const {
    return lo_ + (static_cast<double>(cell) + 0.5) * cell_width_;
  }

  // Cell containing x; std::nullopt outside [lo, hi].  hi maps to the last
  // cell so the support is treated as closed.
  std::optional<std::size_t> cell_of(double x) const {
    if (x < lo_ || x > hi_) return std::nullopt;
    auto idx = static_cast<std::size_t>((x - lo_) / cell_width_);
    return std::min(idx, weights_.size() - 1);
  }

  // Density value at x (0 outside the support).
  double value_at(double x) const {
    auto c = cell_of(x);
    return c ? weights_[*c] : 0.0;
  }

  double max_value() const {
    return *std::max_element(weights_.begin(), weights_.end());
  }

  bool same_grid(const GridDensity& other) const {
    return lo_ == other.lo_ && hi_ == other.hi_ &&
           weights_.size() == other.weights_.size();
  }

 private:
  double lo_, hi_;
  std::vector<double> weights_;
  double cell_width_;
};

// A parametric 1-D density with pdf and cdf handles.  The cdf is needed so
// quantize() can account for the mass lost to truncation.
struct Parametric {
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  std::string name;

  static Parametric gaussian(double mu, double sigma) {
    if (!(sigma > 0)) throw ValidationError("gaussian: sigma > 0 required");
    const double inv = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
    return {[=](double x) {
              const double z = (x - mu) / sigma;
              return inv * std::exp(-0.5 * z * z);
            },
            [=](double x) {
              return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
            },
            "gaussian"};
  }

  static Parametric uniform(double a, double b) {
    if (!(a < b)) throw ValidationError("uniform: a < b required");
    return {[=](double x) { return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0; },
            [=](double x) {
              if (x <= a) return 0.0;
              if (x >= b) return 1.0;
              return (x - a) / (b - a);
            },
            "uniform"};
  }

  static Parametric exponential(double rate) {
    if (!(rate > 0)) throw ValidationError("exponential: rate > 0 required");
    return {[=](double x) { return x < 0 ? 0.0 : rate * std::exp(-rate * x); },
            [=](double x) { return x < 0 ? 0.0 : 1.0 - std::exp(-rate * x); },
            "exponential"};
  }
};

// Midpoint quantization of a parametric density onto a uniform grid.
// Refuses to drop more than tail_tol of mass unless the caller overrides.
inline GridDensity quantize(const Parametric& p, double lo, double hi,
                            std::size_t cells, double tail_tol = 1e-9) {
  if (cells < 1) throw ValidationError("quantize: cells >= 1 required");
  const double captured = p.cdf(hi) - p.cdf(lo);
  const double lost = 1.0 - captured;
  if (lost > tail_tol)
    throw TailMassError("quantize: truncated tail mass " +
                            std::to_string(lost) + " exceeds tolerance " +
                            std::to_string(tail_tol),
                        lost);
  const double cw = (hi - lo) / static_cast<double>(cells);
  std::vector<double> w(cells);
  for (std::size_t i = 0; i < cells; ++i)
    w[i] = p.pdf(lo + (static_cast<double>(i) + 0.5) * cw);
  return GridDensity::normalized(lo, hi, std::move(w));
}

}  // namespace renyi
