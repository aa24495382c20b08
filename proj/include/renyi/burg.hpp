#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "renyi/entropy.hpp"
#include "renyi/errors.hpp"
#include "renyi/jacobi.hpp"
#include "renyi/rng.hpp"

namespace renyi {

// Autocovariance prefix (alpha_0, ..., alpha_p).  Valid specs have a
// positive definite (p+1)x(p+1) symmetric Toeplitz matrix, certified by
// Cholesky at construction.
struct AutocovSpec {
  std::vector<double> alphas;

  explicit AutocovSpec(std::vector<double> a) : alphas(std::move(a)) {
    if (alphas.empty()) throw ValidationError("AutocovSpec: alpha_0 required");
    if (!toeplitz_is_positive_definite())
      throw ValidationError(
          "AutocovSpec: Toeplitz(alpha_0..alpha_p) is not positive definite");
  }

  int p() const { return int(alphas.size()) - 1; }

  std::vector<std::vector<double>> toeplitz(int dim) const {
    std::vector<std::vector<double>> m(
        std::size_t(dim), std::vector<double>(std::size_t(dim), 0.0));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        m[std::size_t(i)][std::size_t(j)] = alphas[std::size_t(std::abs(i - j))];
    return m;
  }

 private:
  bool toeplitz_is_positive_definite() const {
    auto m = toeplitz(int(alphas.size()));
    const std::size_t n = m.size();
    // In-place Cholesky; fails iff a pivot is nonpositive.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = m[i][j];
        for (std::size_t k = 0; k < j; ++k) s -= m[i][k] * m[j][k];
        if (i == j) {
          if (!(s > 0.0)) return false;
          m[i][i] = std::sqrt(s);
        } else {
          m[i][j] = s / m[j][j];
        }
      }
    }
    return true;
  }
};

struct SpectralAtom {
  double q;               // scaled eigenvalue, q > 0, sum to 1
  std::vector<double> w;  // sqrt(trace) * eigenvector
};

// AR(p) recursion X_i = sum_k a_k X_{i-k} + Z_i with innovation variance
// sigma2 and initialisation second-moment matrix Kp (the p x p Toeplitz
// minor).  The coefficient indexing is by lag k, the standard AR recursion.
struct ARModel {
  std::vector<double> a;
  double sigma2 = 0.0;
  std::vector<std::vector<double>> Kp;
  std::vector<SpectralAtom> spectral;

  int p() const { return int(a.size()); }
};

// Levinson-Durbin recursion on the Yule-Walker system
// Toeplitz(alpha_0..alpha_{p-1}) a = (alpha_1..alpha_p).
// Positive definiteness keeps every reflection coefficient inside (-1, 1)
// and the innovation variance positive.
inline ARModel levinson_durbin(const AutocovSpec& spec) {
  const int p = spec.p();
  ARModel model;
  model.Kp = spec.toeplitz(p);
  double err = spec.alphas[0];
  std::vector<double> a;
  for (int m = 1; m <= p; ++m) {
    double acc = spec.alphas[std::size_t(m)];
    for (int j = 1; j < m; ++j)
      acc -= a[std::size_t(j - 1)] * spec.alphas[std::size_t(m - j)];
    const double k = acc / err;
    if (!(std::abs(k) < 1.0))
      throw ValidationError("levinson_durbin: reflection coefficient " +
                            std::to_string(k) + " outside (-1,1)");
    std::vector<double> next(std::size_t(m), 0.0);
    for (int j = 1; j < m; ++j)
      next[std::size_t(j - 1)] =
          a[std::size_t(j - 1)] - k * a[std::size_t(m - j - 1)];
    next[std::size_t(m - 1)] = k;
    a = std::move(next);
    err *= (1.0 - k * k);
  }
  model.a = std::move(a);
  model.sigma2 = err;
  if (!(model.sigma2 > 0.0))
    throw ValidationError("levinson_durbin: nonpositive innovation variance");
  return model;
}

// Fills model.spectral with the discrete initialisation law: eigenpairs of
// Kp mapped to q_l = lambda_l / trace and w_l = sqrt(trace) u_l, so that
// Pr[W = w_l] = q_l gives E[W W^T] = Kp exactly.
inline void spectral_init(ARModel& model) {
  model.spectral.clear();
  const int p = model.p();
  if (p == 0) return;
  const auto es = jacobi_eigensymm(model.Kp);
  double trace = 0.0;
  for (double lam : es.values) {
    if (!(lam > 0.0))
      throw ValidationError("spectral_init: Kp not positive definite");
    trace += lam;
  }
  const double root = std::sqrt(trace);
  for (std::size_t l = 0; l < es.values.size(); ++l) {
    SpectralAtom atom;
    atom.q = es.values[l] / trace;
    atom.w = es.vectors[l];
    for (double& x : atom.w) x *= root;
    model.spectral.push_back(std::move(atom));
  }
  // Reconstruction residual must vanish to 1e-10 in the max norm.
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      double s = 0.0;
      for (const auto& atom : model.spectral)
        s += atom.q * atom.w[std::size_t(i)] * atom.w[std::size_t(j)];
      if (std::abs(s - model.Kp[std::size_t(i)][std::size_t(j)]) > 1e-10)
        throw Error("spectral_init: reconstruction residual above 1e-10");
    }
}

inline double spectral_reconstruction_residual(const ARModel& model) {
  double worst = 0.0;
  for (int i = 0; i < model.p(); ++i)
    for (int j = 0; j < model.p(); ++j) {
      double s = 0.0;
      for (const auto& atom : model.spectral)
        s += atom.q * atom.w[std::size_t(i)] * atom.w[std::size_t(j)];
      worst = std::max(
          worst, std::abs(s - model.Kp[std::size_t(i)][std::size_t(j)]));
    }
  return worst;
}

// Innovation source: fills a window of Z_1..Z_len.  Must be centered,
// variance sigma2, uncorrelated, independent of the initialisation draw.
using InnovationSource = std::function<std::vector<double>(int, Rng&)>;

inline InnovationSource gaussian_innovations(double sigma2) {
  const double sd = std::sqrt(sigma2);
  return [sd](int len, Rng& rng) {
    std::vector<double> z(std::size_t(len), 0.0);
    for (double& v : z) v = sd * rng.normal();
    return z;
  };
}

// Row-major replicate trajectories including the p initialisation values:
// row = (X_{1-p}, ..., X_0, X_1, ..., X_N).
struct TrajectoryEnsemble {
  int p = 0;
  int horizon = 0;
  int reps = 0;
  std::vector<double> data;

  double at(int rep, int i) const {  // i in {1-p, ..., horizon}
    return data[std::size_t(rep) * std::size_t(p + horizon) +
                std::size_t(i + p - 1)];
  }
};

inline int hardware_threads_capped() {
  unsigned hw = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("RENYI_LAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && (unsigned long)cap < hw) hw = unsigned(cap);
  }
  return int(std::max(1u, hw));
}

// Simulates R replicates over horizon N.  Each replicate draws a fresh
// initialisation atom and a fresh innovation window from seeds derived per
// replicate, so the result is independent of the thread count.
inline TrajectoryEnsemble simulate_ar(const ARModel& model,
                                      const InnovationSource& innovations,
                                      int horizon, int reps,
                                      std::uint64_t seed) {
  const int p = model.p();
  if (p > 0 && model.spectral.empty())
    throw ValidationError("simulate_ar: call spectral_init first");
  TrajectoryEnsemble ens;
  ens.p = p;
  ens.horizon = horizon;
  ens.reps = reps;
  ens.data.assign(std::size_t(reps) * std::size_t(p + horizon), 0.0);
  constexpr double kOverflowGuard = 1e12;

  std::vector<double> atom_cdf;
  double acc = 0.0;
  for (const auto& atom : model.spectral) {
    acc += atom.q;
    atom_cdf.push_back(acc);
  }
  if (!atom_cdf.empty()) atom_cdf.back() = 1.0;

  auto run_range = [&](int lo, int hi, bool& unstable) {
    for (int rep = lo; rep < hi; ++rep) {
      Rng rng(Rng::derive(seed, std::uint64_t(rep)));
      double* row = ens.data.data() +
                    std::size_t(rep) * std::size_t(p + horizon);
      if (p > 0) {
        const double u = rng.uniform01();
        std::size_t l = 0;
        while (l + 1 < atom_cdf.size() && u >= atom_cdf[l]) ++l;
        for (int i = 0; i < p; ++i) row[i] = model.spectral[l].w[std::size_t(i)];
      }
      const auto z = innovations(horizon, rng);
      for (int i = 0; i < horizon; ++i) {
        double x = z[std::size_t(i)];
        for (int k = 1; k <= p; ++k)
          x += model.a[std::size_t(k - 1)] * row[p + i - k];
        if (std::abs(x) > kOverflowGuard) {
          unstable = true;
          return;
        }
        row[p + i] = x;
      }
    }
  };

  const int threads = std::min(hardware_threads_capped(), std::max(reps, 1));
  std::vector<char> unstable_flags(std::size_t(threads), 0);
  if (threads <= 1) {
    bool unstable = false;
    run_range(0, reps, unstable);
    if (unstable) throw InstabilityError("simulate_ar: trajectory overflow");
    return ens;
  }
  std::vector<std::thread> pool;
  const int chunk = (reps + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk, hi = std::min(reps, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, t, lo, hi] {
      bool unstable = false;
      run_range(lo, hi, unstable);
      unstable_flags[std::size_t(t)] = unstable ? 1 : 0;
    });
  }
  for (auto& th : pool) th.join();
  for (char f : unstable_flags)
    if (f) throw InstabilityError("simulate_ar: trajectory overflow");
  return ens;
}

struct BurgCheckRow {
  int k = 0;
  int i = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  double zscore = 0.0;
  bool pass = false;
};

struct BurgCheckReport {
  bool pass = true;
  double worst_z = 0.0;
  std::vector<BurgCheckRow> rows;
};

// Checks E[X_i X_{i+k}] = alpha_k against the ensemble at a probe set of i
// for every k <= p, within tol_sigmas standard errors.
inline BurgCheckReport verify_burg_constraints(const TrajectoryEnsemble& ens,
                                               const AutocovSpec& spec,
                                               double tol_sigmas) {
  BurgCheckReport rep;
  const int p = spec.p();
  for (int k = 0; k <= p; ++k) {
    std::vector<int> probes = {1, 2, ens.horizon / 2, ens.horizon - k};
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    for (int i : probes) {
      if (i < 1 || i + k > ens.horizon) continue;
      double s = 0.0, s2 = 0.0;
      for (int rep_i = 0; rep_i < ens.reps; ++rep_i) {
        const double v = ens.at(rep_i, i) * ens.at(rep_i, i + k);
        s += v;
        s2 += v * v;
      }
      BurgCheckRow row;
      row.k = k;
      row.i = i;
      row.mean = s / double(ens.reps);
      const double var = std::max(s2 / double(ens.reps) - row.mean * row.mean,
                                  1e-300);
      row.std_error = std::sqrt(var / double(ens.reps));
      row.target = spec.alphas[std::size_t(k)];
      row.zscore = std::abs(row.mean - row.target) / row.std_error;
      row.pass = row.zscore <= tol_sigmas;
      rep.worst_z = std::max(rep.worst_z, row.zscore);
      rep.pass = rep.pass && row.pass;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

struct SandwichReport {
  int n = 0;
  double hZ = 0.0;     // h_alpha(Z_1^n) of the innovation block
  double lower = 0.0;  // = hZ
  double upper = 0.0;
  double gap = 0.0;    // upper - lower; divided by n it vanishes in rate
};

// Window sandwich h_alpha(Z_1^n) <= h_alpha(X_1^n) <= gap + h_alpha(Z_1^n).
// For alpha > 1 the gap is min_l (alpha/(1-alpha)) ln q_l from the mixture
// upper bound over the initialisation atoms; that bound flips direction for
// alpha < 1, where the p-term mixture bound 1/(1-alpha) ln p applies
// instead.  Either way the gap is independent of n, so the rate gap decays
// like 1/n.
inline SandwichReport renyi_rate_sandwich(double hZ,
                                          std::span<const double> q,
                                          double alpha, int n) {
  if (!(alpha > 0.0) || alpha == 1.0)
    throw ValidationError("renyi_rate_sandwich: alpha > 0, != 1");
  if (n < 1) throw ValidationError("renyi_rate_sandwich: n >= 1");
  double gap = 0.0;
  std::size_t atoms = 0;
  if (alpha > 1.0) {
    double best = kInf;
    for (double qi : q) {
      if (qi <= 0.0) continue;  // zero-weight atoms carry a vacuous bound
      ++atoms;
      best = std::min(best, alpha / (1.0 - alpha) * std::log(qi));
    }
    gap = atoms == 0 ? 0.0 : best;
  } else {
    for (double qi : q)
      if (qi > 0.0) ++atoms;
    gap = atoms == 0 ? 0.0 : std::log(double(atoms)) / (1.0 - alpha);
  }
  SandwichReport rep;
  rep.n = n;
  rep.hZ = hZ;
  rep.lower = hZ;
  rep.upper = hZ + gap;
  rep.gap = gap;
  return rep;
}

}  // namespace renyi
