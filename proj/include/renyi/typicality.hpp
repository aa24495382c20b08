#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "renyi/cost.hpp"
#include "renyi/entropy.hpp"
#include "renyi/errors.hpp"
#include "renyi/grid_density.hpp"
#include "renyi/rng.hpp"

namespace renyi {

// Reference data for the weakly typical set T and the cost-typical set A of
// a grid density.  Entropies are in nats throughout, so the membership bands
// use e^{+-n eps} where the classical definitions use 2^{+-n eps}.
//
// The set machinery discretises the cost to cell midpoints: a tuple's cost
// profile is decided by the cells it visits, which is what makes volumes,
// marginals and samplers exactly computable.  The pointwise predicates below
// evaluate r at the actual coordinates.
struct TypicalSpec {
  GridDensity f;
  int n;
  double eps;
  CostSpec cost;

  double h;   // Shannon entropy of f (nats)
  double er;  // integral f r, midpoint rule on f's grid

  TypicalSpec(GridDensity f_, int n_, double eps_, CostSpec cost_)
      : f(std::move(f_)), n(n_), eps(eps_), cost(std::move(cost_)) {
    if (n < 1) throw ValidationError("TypicalSpec: n >= 1 required");
    if (!(eps > 0.0)) throw ValidationError("TypicalSpec: eps > 0 required");
    h = shannon_entropy(f).nats;
    const auto ce = cost_expectation(f, cost);
    if (!std::isfinite(h) || !std::isfinite(ce.abs_value))
      throw ValidationError("TypicalSpec: h(f) and E|r| must be finite");
    er = ce.value;
  }
};

// Closed band of Eq-style weak typicality (both ends included).
inline bool log_band_contains_closed(double lo, double hi, double v) {
  return lo <= v && v <= hi;
}

// Strict band used by cost typicality.
inline bool band_contains_strict(double center, double eps, double v) {
  return std::abs(v - center) < eps;
}

// true iff e^{-n(h+eps)} <= prod f(x_k) <= e^{-n(h-eps)}.
inline bool is_weakly_typical(std::span<const double> x,
                              const TypicalSpec& spec) {
  double log_prod = 0.0;
  for (double xi : x) {
    const double v = spec.f.value_at(xi);
    if (v == 0.0) return false;  // outside support: product is 0
    log_prod += std::log(v);
  }
  const double n = static_cast<double>(x.size());
  return log_band_contains_closed(-n * (spec.h + spec.eps),
                                  -n * (spec.h - spec.eps), log_prod);
}

// true iff | n^{-1} sum r(x_k) - integral f r | < eps (strict).
inline bool is_cost_typical(std::span<const double> x,
                            const TypicalSpec& spec) {
  double s = 0.0;
  for (double xi : x) s += spec.cost.r(xi);
  return band_contains_strict(spec.er, spec.eps,
                              s / static_cast<double>(x.size()));
}

namespace detail {

inline std::vector<double> log_factorials(int n) {
  std::vector<double> lf(n + 1, 0.0);
  for (int i = 2; i <= n; ++i) lf[i] = lf[i - 1] + std::log(double(i));
  return lf;
}

inline double binomial_count(std::uint64_t n, std::uint64_t k) {
  // Exact for the n in scope (n <= 62 keeps this well inside double range).
  double c = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i)
    c = c * double(n - k + i) / double(i);
  return c;
}

// Number of compositions of n into C nonnegative parts.
inline double composition_count(int n, int cells) {
  return binomial_count(std::uint64_t(n + cells - 1),
                        std::uint64_t(cells - 1));
}

}  // namespace detail

struct MassEstimate {
  double estimate;
  double std_error;
  std::int64_t samples;
};

enum class SamplerMode { kEnumerate, kRejection };

struct BlockBuildOptions {
  double enumeration_budget = 1e7;  // max type classes visited
  SamplerMode forced_mode = SamplerMode::kEnumerate;
  bool force_mode = false;
  std::int64_t rejection_pilot = 20000;
  std::uint64_t rejection_seed = 0x5eedULL;
};

// The uniform block density over T intersect A.
//
// Membership of a cell tuple depends only on its type class (the per-cell
// visit counts): both the log-product of densities and the mean midpoint
// cost are permutation invariant.  Enumerate mode therefore walks
// compositions of n over the cells, keeping the classes inside both bands.
// That makes log-volume, boundary marginals and their Renyi entropies exact
// and keeps the uniform sampler exact as well.
class TypicalBlockDensity {
 public:
  static TypicalBlockDensity build(TypicalSpec spec,
                                   BlockBuildOptions opts = {}) {
    TypicalBlockDensity b(std::move(spec));
    const int cells = static_cast<int>(b.spec_.f.size());
    const double classes = detail::composition_count(b.spec_.n, cells);
    const bool can_enumerate = classes <= opts.enumeration_budget;
    const bool enumerate =
        opts.force_mode ? opts.forced_mode == SamplerMode::kEnumerate
                        : can_enumerate;
    if (enumerate && !can_enumerate)
      throw ConstructionError(
          "TypicalBlockDensity: enumeration budget exceeded");
    if (enumerate) {
      b.mode_ = SamplerMode::kEnumerate;
      b.enumerate_members();
      if (b.members_count_ == 0)
        throw ConstructionError(
            "TypicalBlockDensity: typical set is empty at this (n, eps)");
    } else {
      b.mode_ = SamplerMode::kRejection;
      b.pilot_rejection(opts);
    }
    b.card_bound_ok_ =
        b.log_volume_ >= std::log1p(-b.spec_.eps) +
                             b.spec_.n * (b.spec_.h - b.spec_.eps);
    return b;
  }

  const TypicalSpec& spec() const { return spec_; }
  SamplerMode mode() const { return mode_; }
  double log_volume() const { return log_volume_; }
  bool card_bound_ok() const { return card_bound_ok_; }

  // Uniform density over a set has order-alpha entropy ln(volume), any alpha.
  double entropy(double) const { return log_volume_; }

  // --- enumerate-mode exact quantities ------------------------------------

  std::size_t member_class_count() const { return members_.size(); }
  int cells() const { return static_cast<int>(spec_.f.size()); }

  std::span<const int> member_class(std::size_t i) const {
    return {class_counts_.data() + i * cells(), std::size_t(cells())};
  }

  // ln of the number of member tuples.
  double log_member_count() const {
    require_enumerate("log_member_count");
    return log_members_count_;
  }

  // Number of member tuples in class i (as double; exact for desk sizes).
  double class_multiplicity(std::size_t i) const {
    require_enumerate("class_multiplicity");
    return std::exp(log_mult_[i]);
  }

  // Probability of the typical set under IID f, exactly (sum over classes).
  double exact_mass() const {
    require_enumerate("exact_mass");
    double p = 0.0;
    const auto& f = spec_.f;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      double logp = log_mult_[i];
      const auto k = member_class(i);
      for (int c = 0; c < cells(); ++c)
        if (k[c] > 0) logp += k[c] * std::log(f.mass(std::size_t(c)));
      p += std::exp(logp);
    }
    return p;
  }

  // Marginal density of (X_1..X_rho) at a given cell prefix, exact.
  double marginal_density(std::span<const int> prefix_cells) const {
    require_enumerate("marginal_density");
    const int rho = static_cast<int>(prefix_cells.size());
    std::vector<int> tau(cells(), 0);
    for (int c : prefix_cells) tau[c] += 1;
    const double log_ext = log_extension_count(tau, rho);
    if (log_ext == -kInf) return 0.0;
    const double cw = spec_.f.cell_width();
    return std::exp(log_ext + (spec_.n - rho) * std::log(cw) - log_volume_);
  }

  // Exact order-alpha Renyi entropy of the rho-marginal (alpha == 1 gives
  // Shannon).  The block is exchangeable, so leading == trailing.
  double marginal_entropy(int rho, double alpha) const {
    require_enumerate("marginal_entropy");
    if (rho < 1 || rho > spec_.n)
      throw ValidationError("marginal_entropy: rho in 1..n");
    if (rho == spec_.n) return log_volume_;
    const double logcw = std::log(spec_.f.cell_width());
    const auto lf = detail::log_factorials(spec_.n);
    // Walk all prefix types tau; each contributes (#arrangements of tau)
    // prefix tuples sharing one marginal value.  Collect
    // (log of arrangements * cw^rho, log of the marginal value) pairs.
    std::vector<std::pair<double, double>> terms;
    std::vector<int> tau(cells(), 0);
    auto visit = [&](auto&& self, int cell, int left) -> void {
      if (cell == cells() - 1) {
        tau[std::size_t(cell)] = left;
        const double log_ext = log_extension_count(tau, rho);
        if (log_ext != -kInf) {
          double log_arr = lf[std::size_t(rho)];
          for (int c = 0; c < cells(); ++c) log_arr -= lf[std::size_t(tau[std::size_t(c)])];
          const double log_value =
              log_ext + (spec_.n - rho) * logcw - log_volume_;
          terms.emplace_back(log_arr + rho * logcw, log_value);
        }
        tau[std::size_t(cell)] = 0;
        return;
      }
      for (int k = 0; k <= left; ++k) {
        tau[std::size_t(cell)] = k;
        self(self, cell + 1, left - k);
      }
      tau[std::size_t(cell)] = 0;
    };
    visit(visit, 0, rho);
    if (alpha == 1.0) {
      double acc = 0.0;  // -sum (arrangements * cw^rho) * v ln v
      for (const auto& [log_meas, log_v] : terms)
        acc -= std::exp(log_meas + log_v) * log_v;
      return acc;
    }
    double mx = -kInf;
    for (const auto& [log_meas, log_v] : terms)
      mx = std::max(mx, log_meas + alpha * log_v);
    double s = 0.0;
    for (const auto& [log_meas, log_v] : terms)
      s += std::exp(log_meas + alpha * log_v - mx);
    return (mx + std::log(s)) / (1.0 - alpha);
  }

  // Exact per-coordinate moments of the block law, including the uniform
  // within-cell spread (contributes width^2/12 to the second moment).
  double percoord_mean() const {
    require_enumerate("percoord_mean");
    double acc = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const double p = std::exp(log_mult_[i] - log_members_count_);
      const auto k = member_class(i);
      double m = 0.0;
      for (int c = 0; c < cells(); ++c)
        m += k[c] * spec_.f.midpoint(std::size_t(c));
      acc += p * m / spec_.n;
    }
    return acc;
  }

  double percoord_second_moment() const {
    require_enumerate("percoord_second_moment");
    double acc = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const double p = std::exp(log_mult_[i] - log_members_count_);
      const auto k = member_class(i);
      double m = 0.0;
      for (int c = 0; c < cells(); ++c) {
        const double mid = spec_.f.midpoint(std::size_t(c));
        m += k[c] * mid * mid;
      }
      acc += p * m / spec_.n;
    }
    const double cw = spec_.f.cell_width();
    return acc + cw * cw / 12.0;
  }

  // Exact mean of the per-tuple average midpoint cost under the block law.
  double percoord_cost() const {
    require_enumerate("percoord_cost");
    double acc = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const double p = std::exp(log_mult_[i] - log_members_count_);
      acc += p * class_mean_cost_[i];
    }
    return acc;
  }

  // Largest per-tuple average midpoint cost over member classes.
  double max_class_cost() const {
    require_enumerate("max_class_cost");
    double m = -kInf;
    for (double c : class_mean_cost_) m = std::max(m, c);
    return m;
  }

  // --- sampling ------------------------------------------------------------

  // One exact uniform draw over the member set (both modes).
  std::vector<double> sample(Rng& rng, int max_attempts = 1000000) const {
    if (mode_ == SamplerMode::kEnumerate) return sample_enumerate(rng);
    return sample_rejection(rng, max_attempts);
  }

  // Class index of a cell tuple, or nullopt if not a member class
  // (enumerate mode helper for goodness-of-fit tests).
  std::optional<std::size_t> class_of(std::span<const int> cell_tuple) const {
    require_enumerate("class_of");
    std::vector<int> k(cells(), 0);
    for (int c : cell_tuple) k[c] += 1;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const auto mk = member_class(i);
      if (std::equal(mk.begin(), mk.end(), k.begin())) return i;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> cell_of(double x) const {
    auto c = spec_.f.cell_of(x);
    if (!c) return std::nullopt;
    return *c;
  }

 private:
  explicit TypicalBlockDensity(TypicalSpec spec) : spec_(std::move(spec)) {}

  void require_enumerate(const char* op) const {
    if (mode_ != SamplerMode::kEnumerate)
      throw Error(std::string("TypicalBlockDensity: ") + op +
                  " requires enumerate mode");
  }

  bool class_is_member(std::span<const int> k, double& mean_cost_out) const {
    const auto& f = spec_.f;
    double log_prod = 0.0, cost_sum = 0.0;
    for (int c = 0; c < cells(); ++c) {
      if (k[c] == 0) continue;
      const double w = f.value(std::size_t(c));
      if (w == 0.0) return false;
      log_prod += k[c] * std::log(w);
      cost_sum += k[c] * cost_mid_[std::size_t(c)];
    }
    const double n = spec_.n;
    const double mean_cost = cost_sum / n;
    mean_cost_out = mean_cost;
    return log_band_contains_closed(-n * (spec_.h + spec_.eps),
                                    -n * (spec_.h - spec_.eps), log_prod) &&
           band_contains_strict(spec_.er, spec_.eps, mean_cost);
  }

  void enumerate_members() {
    cost_mid_ = spec_.cost.table(spec_.f);
    const int C = cells();
    const auto lf = detail::log_factorials(spec_.n);
    std::vector<int> k(C, 0);
    double log_count_max = -kInf;
    std::vector<double> log_counts;
    auto visit = [&](auto&& self, int cell, int left) -> void {
      if (cell == C - 1) {
        k[cell] = left;
        double mean_cost = 0.0;
        if (class_is_member(k, mean_cost)) {
          double lm = lf[spec_.n];
          for (int c = 0; c < C; ++c) lm -= lf[k[c]];
          members_.push_back(members_.size());
          class_counts_.insert(class_counts_.end(), k.begin(), k.end());
          log_mult_.push_back(lm);
          class_mean_cost_.push_back(mean_cost);
          log_counts.push_back(lm);
          log_count_max = std::max(log_count_max, lm);
        }
        k[cell] = 0;
        return;
      }
      for (int c = 0; c <= left; ++c) {
        k[cell] = c;
        self(self, cell + 1, left - c);
      }
      k[cell] = 0;
    };
    visit(visit, 0, spec_.n);
    if (members_.empty()) {
      members_count_ = 0;
      log_volume_ = -kInf;
      return;
    }
    double s = 0.0;
    for (double lc : log_counts) s += std::exp(lc - log_count_max);
    log_members_count_ = log_count_max + std::log(s);
    members_count_ = std::exp(log_members_count_);
    log_volume_ =
        log_members_count_ + spec_.n * std::log(spec_.f.cell_width());
    // Cumulative class weights for exact class sampling.
    class_cdf_.resize(members_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      acc += std::exp(log_mult_[i] - log_members_count_);
      class_cdf_[i] = acc;
    }
    class_cdf_.back() = 1.0;
  }

  // ln of the number of member tuples whose first rho coordinates follow a
  // fixed sequence of prefix type tau.
  double log_extension_count(const std::vector<int>& tau, int rho) const {
    const auto lf = detail::log_factorials(spec_.n);
    double vmax = -kInf;
    std::vector<double> vals;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const auto k = member_class(i);
      bool fits = true;
      for (int c = 0; c < cells(); ++c)
        if (tau[c] > k[c]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      double v = lf[spec_.n - rho];
      for (int c = 0; c < cells(); ++c) v -= lf[k[c] - tau[c]];
      vals.push_back(v);
      vmax = std::max(vmax, v);
    }
    if (vals.empty()) return -kInf;
    double s = 0.0;
    for (double v : vals) s += std::exp(v - vmax);
    return vmax + std::log(s);
  }

  std::vector<double> sample_enumerate(Rng& rng) const {
    // Class ~ multiplicity, then a uniformly random arrangement of the
    // multiset, then a uniform position inside each cell.
    const double u = rng.uniform01();
    std::size_t ci =
        std::lower_bound(class_cdf_.begin(), class_cdf_.end(), u) -
        class_cdf_.begin();
    if (ci >= members_.size()) ci = members_.size() - 1;
    const auto k = member_class(ci);
    std::vector<int> cells_seq;
    cells_seq.reserve(spec_.n);
    for (int c = 0; c < cells(); ++c)
      cells_seq.insert(cells_seq.end(), std::size_t(k[c]), c);
    for (std::size_t i = cells_seq.size(); i > 1; --i)
      std::swap(cells_seq[i - 1], cells_seq[rng.index(i)]);
    std::vector<double> x(spec_.n);
    const double cw = spec_.f.cell_width();
    for (int i = 0; i < spec_.n; ++i) {
      const double left = spec_.f.lo() + cells_seq[std::size_t(i)] * cw;
      x[std::size_t(i)] = left + cw * rng.uniform01();
    }
    return x;
  }

  std::vector<double> sample_rejection(Rng& rng, int max_attempts) const {
    // Proposal: IID f.  On members prod f >= c := e^{-n(h+eps)}, so
    // accepting with probability c / prod f yields the exact uniform law.
    const double log_c = -spec_.n * (spec_.h + spec_.eps);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      std::vector<int> cells_seq(std::size_t(spec_.n), 0);
      double log_prod = 0.0, cost_sum = 0.0;
      for (int i = 0; i < spec_.n; ++i) {
        const std::size_t c = draw_cell(rng);
        cells_seq[std::size_t(i)] = static_cast<int>(c);
        log_prod += std::log(spec_.f.value(c));
        cost_sum += cost_mid_[c];
      }
      const double nn = spec_.n;
      if (!log_band_contains_closed(-nn * (spec_.h + spec_.eps),
                                    -nn * (spec_.h - spec_.eps), log_prod))
        continue;
      if (!band_contains_strict(spec_.er, spec_.eps, cost_sum / nn)) continue;
      if (std::log(rng.uniform01()) > log_c - log_prod) continue;
      std::vector<double> x(std::size_t(spec_.n), 0.0);
      const double cw = spec_.f.cell_width();
      for (int i = 0; i < spec_.n; ++i)
        x[std::size_t(i)] = spec_.f.lo() +
                            cells_seq[std::size_t(i)] * cw +
                            cw * rng.uniform01();
      return x;
    }
    throw SamplingError("TypicalBlockDensity: acceptance starvation");
  }

  std::size_t draw_cell(Rng& rng) const {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t c = 0; c + 1 < spec_.f.size(); ++c) {
      acc += spec_.f.mass(c);
      if (u < acc) return c;
    }
    return spec_.f.size() - 1;
  }

  void pilot_rejection(const BlockBuildOptions& opts) {
    cost_mid_ = spec_.cost.table(spec_.f);
    Rng rng(opts.rejection_seed);
    const double log_c = -spec_.n * (spec_.h + spec_.eps);
    std::int64_t hits = 0;
    double accept_mass = 0.0;
    double vol_acc = 0.0;  // importance estimate of the volume
    for (std::int64_t s = 0; s < opts.rejection_pilot; ++s) {
      double log_prod = 0.0, cost_sum = 0.0;
      for (int i = 0; i < spec_.n; ++i) {
        const std::size_t c = draw_cell(rng);
        log_prod += std::log(spec_.f.value(c));
        cost_sum += cost_mid_[c];
      }
      const double nn = spec_.n;
      const bool member =
          log_band_contains_closed(-nn * (spec_.h + spec_.eps),
                                   -nn * (spec_.h - spec_.eps), log_prod) &&
          band_contains_strict(spec_.er, spec_.eps, cost_sum / nn);
      if (member) {
        ++hits;
        accept_mass += std::exp(log_c - log_prod);
        vol_acc += std::exp(-log_prod);
      }
    }
    const double acceptance =
        accept_mass / static_cast<double>(opts.rejection_pilot);
    if (acceptance < 1e-6)
      throw ConstructionError(
          "TypicalBlockDensity: rejection acceptance below 1e-6");
    // E[1{member} / prod f] under IID f is the Lebesgue volume directly.
    const double mean_inv =
        vol_acc / static_cast<double>(opts.rejection_pilot);
    log_volume_ = std::log(mean_inv);
    members_count_ = hits;  // informational only in rejection mode
  }

  TypicalSpec spec_;
  SamplerMode mode_ = SamplerMode::kEnumerate;
  double log_volume_ = -kInf;
  double log_members_count_ = -kInf;
  double members_count_ = 0.0;
  bool card_bound_ok_ = false;

  std::vector<double> cost_mid_;
  std::vector<std::size_t> members_;
  std::vector<int> class_counts_;  // flat, stride = cells()
  std::vector<double> log_mult_;
  std::vector<double> class_mean_cost_;
  std::vector<double> class_cdf_;
};

inline TypicalBlockDensity build_typical_block(TypicalSpec spec,
                                               BlockBuildOptions opts = {}) {
  return TypicalBlockDensity::build(std::move(spec), opts);
}

// One uniform draw over the member set from a fresh seeded stream.
inline std::vector<double> sample_typical_uniform(
    const TypicalBlockDensity& block, std::uint64_t seed) {
  Rng rng(seed);
  return block.sample(rng);
}

// Monte Carlo estimate of Pr[(X_1..X_n) in T intersect A] under IID f,
// with cell-level membership (the same semantics the set machinery uses).
inline MassEstimate typical_mass(const TypicalSpec& spec, std::int64_t N,
                                 std::uint64_t seed) {
  if (N < 1) throw ValidationError("typical_mass: N >= 1");
  Rng rng(seed);
  const auto cost_mid = spec.cost.table(spec.f);
  std::vector<double> cum(spec.f.size());
  double acc = 0.0;
  for (std::size_t c = 0; c < spec.f.size(); ++c) {
    acc += spec.f.mass(c);
    cum[c] = acc;
  }
  cum.back() = 1.0;
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < N; ++s) {
    double log_prod = 0.0, cost_sum = 0.0;
    for (int i = 0; i < spec.n; ++i) {
      const double u = rng.uniform01();
      const std::size_t c =
          std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
      log_prod += std::log(spec.f.value(c));
      cost_sum += cost_mid[c];
    }
    const double nn = spec.n;
    if (log_band_contains_closed(-nn * (spec.h + spec.eps),
                                 -nn * (spec.h - spec.eps), log_prod) &&
        band_contains_strict(spec.er, spec.eps, cost_sum / nn))
      ++hits;
  }
  const double p = double(hits) / double(N);
  return {p, std::sqrt(std::max(p * (1.0 - p), 1e-300) / double(N)), N};
}

// Smallest n <= n_max at which the cardinality lower bound
//   ln |T intersect A| >= ln(1-eps) + n (h - eps)
// holds, using exact enumeration per n.
inline std::optional<int> find_n_threshold(const GridDensity& f, double eps,
                                           const CostSpec& cost, int n_max,
                                           BlockBuildOptions opts = {}) {
  for (int n = 1; n <= n_max; ++n) {
    try {
      auto block = TypicalBlockDensity::build(TypicalSpec(f, n, eps, cost),
                                              opts);
      if (block.card_bound_ok()) return n;
    } catch (const ConstructionError&) {
      continue;  // empty set at small n
    }
  }
  return std::nullopt;
}

// Suggests a block length from a target typical mass by probing.
inline int suggest_n(const GridDensity& f, double eps, const CostSpec& cost,
                     double target_mass = 0.99, int n_max = 4096,
                     std::int64_t probe_samples = 4000,
                     std::uint64_t seed = 0x5eedULL) {
  for (int n = 1; n <= n_max; n = std::max(n + 1, n * 3 / 2)) {
    const auto est =
        typical_mass(TypicalSpec(f, n, eps, cost), probe_samples,
                     Rng::derive(seed, std::uint64_t(n)));
    if (est.estimate >= target_mass) return n;
  }
  return n_max;
}

}  // namespace renyi
