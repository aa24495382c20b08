// renyi_lab: command-line front end for the cost-constrained and
// autocovariance-constrained Renyi-rate constructions.
//
// Exit codes: 0 success, 1 usage or validation error, 2 a constraint
// verification ran and failed.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "renyi/burg.hpp"
#include "renyi/entropy.hpp"
#include "renyi/grid_density.hpp"
#include "renyi/io.hpp"
#include "renyi/maxent.hpp"
#include "renyi/mixtures.hpp"
#include "renyi/rng.hpp"
#include "renyi/stationarize.hpp"
#include "renyi/truncation.hpp"
#include "renyi/typicality.hpp"

using namespace renyi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
  } else {
    save_text(output_path, text);
  }
}

std::string csv_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- cost / density plumbing ------------------------------------------------

struct CostFlags {
  std::string kind = "quadratic";
  double gamma = 1.0;
  std::vector<double> support = {-10.0, 10.0};
  std::size_t cells = CostSpec::kDefaultCells;
  std::string table_path;
  double gamma0 = 0.0;
  bool has_gamma0 = false;
};

void add_cost_flags(CLI::App* cmd, CostFlags* flags) {
  cmd->add_option("--cost", flags->kind,
                  "cost kind: quadratic | linear | json-tabulated")
      ->check(CLI::IsMember({"quadratic", "linear", "json-tabulated"}));
  cmd->add_option("--gamma", flags->gamma, "budget Gamma");
  auto* g0 = cmd->add_option("--gamma0", flags->gamma0,
                             "declared feasibility floor Gamma_0");
  g0->each([flags](const std::string&) { flags->has_gamma0 = true; });
  cmd->add_option("--support", flags->support,
                  "support interval lo,hi (truncation for unbounded costs)")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--cells", flags->cells, "support discretisation cells");
  cmd->add_option("--cost-table", flags->table_path,
                  "JSON array of per-cell cost values (json-tabulated)");
}

CostSpec make_cost(const CostFlags& flags) {
  const Interval support{flags.support[0], flags.support[1]};
  const std::optional<double> gamma0 =
      flags.has_gamma0 ? std::optional<double>(flags.gamma0) : std::nullopt;
  if (flags.kind == "quadratic")
    return CostSpec::quadratic(flags.gamma, support, gamma0, flags.cells);
  if (flags.kind == "linear")
    return CostSpec::linear(flags.gamma, support, gamma0, flags.cells);
  if (flags.table_path.empty())
    throw ValidationError("json-tabulated cost needs --cost-table");
  const auto values = load_json(flags.table_path).get<std::vector<double>>();
  return CostSpec::tabulated(values, support, flags.gamma, gamma0);
}

Json cost_to_json(const CostFlags& flags) {
  Json j;
  j["kind"] = flags.kind;
  j["gamma"] = flags.gamma;
  j["support"] = flags.support;
  j["cells"] = flags.cells;
  return j;
}

CostSpec cost_from_json(const Json& j) {
  CostFlags flags;
  flags.kind = j.value("kind", std::string("quadratic"));
  flags.gamma = j.at("gamma").get<double>();
  if (j.contains("support"))
    flags.support = j.at("support").get<std::vector<double>>();
  flags.cells = j.value("cells", CostSpec::kDefaultCells);
  if (j.contains("table")) {
    return CostSpec::tabulated(j.at("table").get<std::vector<double>>(),
                               {flags.support[0], flags.support[1]},
                               flags.gamma);
  }
  return make_cost(flags);
}

// --- process descriptors (construct <-> burg simulate) ----------------------

struct ConstructFlags {
  double sigma2 = 1.0;
  double alpha = 2.0;
  std::optional<double> eps_tilde;
  std::optional<double> target_rate;
  std::uint64_t seed = 1;
  std::int64_t verify_samples = 100000;
};

std::pair<BlockProcess, SecondMomentReport> run_construct(
    const ConstructFlags& flags) {
  SecondMomentTarget target;
  target.eps_tilde = flags.eps_tilde;
  target.rate_floor = flags.target_rate;
  SecondMomentOptions opts;
  opts.verify_samples = flags.verify_samples;
  return construct_second_moment_process(flags.sigma2, flags.alpha, target,
                                         flags.seed, opts);
}

Json construct_descriptor(const ConstructFlags& flags) {
  Json j;
  j["kind"] = "second_moment_process";
  j["sigma2"] = flags.sigma2;
  j["alpha"] = flags.alpha;
  if (flags.eps_tilde) j["eps_tilde"] = *flags.eps_tilde;
  if (flags.target_rate) j["target_rate"] = *flags.target_rate;
  j["seed"] = flags.seed;
  return j;
}

BlockProcess process_from_descriptor(const Json& j) {
  if (j.value("kind", std::string()) != "second_moment_process")
    throw ValidationError("process descriptor: unknown kind");
  ConstructFlags flags;
  flags.sigma2 = j.at("sigma2").get<double>();
  flags.alpha = j.at("alpha").get<double>();
  if (j.contains("eps_tilde")) flags.eps_tilde = j.at("eps_tilde").get<double>();
  if (j.contains("target_rate"))
    flags.target_rate = j.at("target_rate").get<double>();
  flags.seed = j.at("seed").get<std::uint64_t>();
  flags.verify_samples = 1000;  // the rebuild only needs the sampler
  return run_construct(flags).first;
}

Json second_moment_report_json(const SecondMomentReport& rep) {
  Json j;
  j["sigma2"] = rep.sigma2;
  j["alpha"] = rep.alpha;
  j["target_rate"] = rep.target_rate;
  j["achieved_rate"] = rep.achieved_rate;
  j["n"] = rep.n;
  j["eps"] = rep.eps;
  j["scale"] = rep.scale;
  j["delta"] = rep.delta;
  j["exact_mean"] = rep.exact_mean;
  j["exact_second_moment"] = rep.exact_second_moment;
  j["mean_z"] = rep.z.mean_z;
  j["lag0_z"] = rep.z.lag0_z;
  j["max_cross_z"] = rep.z.max_cross_z;
  Json sched = Json::array();
  for (const auto& [n, rate] : rep.rate_schedule) {
    Json row;
    row["n"] = n;
    row["rate"] = rate;
    sched.push_back(row);
  }
  j["rate_schedule"] = sched;
  return j;
}

// --- block descriptors (typical / stationarize) ------------------------------

TypicalSpec typical_spec_from_json(const Json& j) {
  return TypicalSpec(grid_from_json(j.at("density")), j.at("n").get<int>(),
                     j.at("eps").get<double>(), cost_from_json(j.at("cost")));
}

// --- verify-all desk suite ---------------------------------------------------

struct Check {
  std::string name;
  bool pass = false;
  Json details;
};

Json checks_to_json(const std::string& suite, std::uint64_t seed,
                    const std::vector<Check>& checks, bool* all_pass) {
  Json j;
  j["suite"] = suite;
  j["seed"] = seed;
  Json arr = Json::array();
  bool ok = true;
  for (const auto& c : checks) {
    Json row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["details"] = c.details;
    arr.push_back(row);
    ok = ok && c.pass;
  }
  j["checks"] = arr;
  j["pass"] = ok;
  *all_pass = ok;
  return j;
}

std::vector<Check> run_desk_suite(std::uint64_t seed) {
  std::vector<Check> checks;

  {  // Closed-form entropies against quadrature.
    Check c{"entropy_closed_forms", false, Json::object()};
    const auto g = quantize(Parametric::gaussian(0.0, 1.0), -8.0, 8.0,
                            std::size_t{1} << 14);
    const double shannon_err =
        std::abs(shannon_entropy(g).nats - gaussian_shannon(1.0));
    const double renyi_err =
        std::abs(renyi_entropy(g, 2.0).nats - gaussian_renyi(1.0, 2.0));
    const double unif =
        std::abs(renyi_entropy(GridDensity::uniform(0.0, 2.0, 64), 2.0).nats -
                 std::log(2.0));
    c.details["shannon_err"] = shannon_err;
    c.details["renyi2_err"] = renyi_err;
    c.details["uniform_err"] = unif;
    c.pass = shannon_err < 1e-6 && renyi_err < 1e-6 && unif < 1e-12;
    checks.push_back(c);
  }

  {  // Renyi-vs-Shannon ordering on random densities.
    Check c{"entropy_ordering", false, Json::object()};
    Rng rng(Rng::derive(seed, 1));
    int violations = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> w(2 + rng.index(30));
      for (double& x : w) x = rng.uniform01();
      if (compensated_sum(w) == 0.0) w[0] = 1.0;
      const auto f = GridDensity::normalized(0.0, 1.0 + rng.uniform01(),
                                             std::move(w));
      const double h = shannon_entropy(f).nats;
      if (renyi_entropy(f, 2.0).nats > h + 1e-9) ++violations;
      if (renyi_entropy(f, 0.5).nats < h - 1e-9) ++violations;
    }
    c.details["trials"] = trials;
    c.details["violations"] = violations;
    c.pass = violations == 0;
    checks.push_back(c);
  }

  {  // Maxent solver: Gaussian point plus curve shape.
    Check c{"maxent_solver", false, Json::object()};
    const auto cost = CostSpec::quadratic(1.0, {-10.0, 10.0});
    const auto point = solve_hstar_point(cost);
    const double err = std::abs(point.hstar - gaussian_shannon(1.0));
    const auto pts = hstar_curve(CostSpec::quadratic(1.0, {-12.0, 12.0}),
                                 {0.5, 0.75, 1.0, 1.5, 2.0});
    c.details["hstar_err"] = err;
    c.details["curve_ok"] = curve_is_monotone_concave(pts);
    c.pass = err < 1e-5 && curve_is_monotone_concave(pts);
    checks.push_back(c);
  }

  {  // Truncation pipeline guarantees.
    Check c{"truncation_pipeline", false, Json::object()};
    Rng rng(Rng::derive(seed, 2));
    int violations = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> w(2 + rng.index(20));
      for (double& x : w) x = rng.uniform01();
      if (compensated_sum(w) == 0.0) w[0] = 1.0;
      const auto f = GridDensity::normalized(-1.0, 1.0, std::move(w));
      const double b = rng.uniform(-1.0, 1.0);
      CostSpec cost([b](double x) { return b * x; }, {-1.0, 1.0}, 0.0, {},
                    f.size());
      cost = cost.with_gamma(cost_expectation(f, cost).value + 1e-12);
      const double delta = rng.uniform(0.05, 0.4);
      const auto [g, rep] = bounded_approach(f, cost, delta);
      if (cost_expectation(g, cost).value > cost.gamma() + delta + 1e-9)
        ++violations;
      if (shannon_entropy(g).nats < shannon_entropy(f).nats - delta - 1e-9)
        ++violations;
    }
    c.details["trials"] = trials;
    c.details["violations"] = violations;
    c.pass = violations == 0;
    checks.push_back(c);
  }

  {  // Typical set: exact enumeration vs Monte Carlo and the size bound.
    Check c{"typicality_two_cell", false, Json::object()};
    const GridDensity f(0.0, 1.0, {1.5, 0.5});
    const auto cost = CostSpec::linear(10.0, {0.0, 1.0}, {}, 2);
    const TypicalSpec spec(f, 10, 0.1, cost);
    const auto block = TypicalBlockDensity::build(spec);
    const auto est = typical_mass(spec, 10000, Rng::derive(seed, 3));
    const double exact = block.exact_mass();
    const double dev = std::abs(est.estimate - exact);
    c.details["exact_mass"] = exact;
    c.details["mc_mass"] = est.estimate;
    c.details["mc_stderr"] = est.std_error;
    c.details["card_bound_ok"] = block.card_bound_ok();
    c.pass = dev <= 3.0 * est.std_error && block.card_bound_ok();
    checks.push_back(c);
  }

  {  // Mixture sandwich on random mixtures.
    Check c{"mixture_sandwich", false, Json::object()};
    Rng rng(Rng::derive(seed, 4));
    int violations = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
      const std::size_t cells = 2 + rng.index(10);
      const std::size_t p = 1 + rng.index(3);
      std::vector<GridDensity> comps;
      std::vector<double> q(p);
      double qs = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        std::vector<double> w(cells);
        for (double& x : w) x = rng.uniform(0.01, 1.0);
        comps.push_back(GridDensity::normalized(0.0, 1.0, std::move(w)));
        q[i] = rng.uniform(0.05, 1.0);
        qs += q[i];
      }
      for (double& v : q) v /= qs;
      double resid = 1.0;
      for (std::size_t i = 0; i + 1 < p; ++i) resid -= q[i];
      q[p - 1] = resid;
      const MixtureSpec m(comps, q);
      for (double alpha : {0.5, 2.0, 4.0}) {
        const double exact = mixture_entropy(m, alpha).nats;
        if (mixture_lower_bound(m, alpha) > exact + 1e-9) ++violations;
        if (mixture_upper_bound(m, alpha) < exact - 1e-9) ++violations;
      }
    }
    c.details["trials"] = trials;
    c.details["violations"] = violations;
    c.pass = violations == 0;
    checks.push_back(c);
  }

  {  // Stationarisation: exact window entropies inside the bounds.
    Check c{"stationarize_bounds", false, Json::object()};
    const GridDensity f(0.0, 2.0, {0.75, 0.25});
    const auto cost = CostSpec::linear(10.0, {0.0, 2.0}, {}, 2);
    const auto block =
        TypicalBlockDensity::build(TypicalSpec(f, 3, 0.35, cost));
    const ExactWindowLaw law(block);
    bool ok = true;
    double worst_gap = 0.0;
    for (double alpha : {0.5, 2.0}) {
      const auto stats = make_block_stats(block, alpha);
      for (int m = 7; m <= 16; ++m) {
        const double exact = law.entropy(m, alpha);
        const auto rep = window_rate_bounds(stats, m);
        ok = ok && rep.lower <= exact + 1e-9 && exact <= rep.upper + 1e-9;
        worst_gap = std::max(worst_gap,
                             std::abs(exact / m - rep.block_rate));
      }
    }
    c.details["worst_rate_gap"] = worst_gap;
    c.pass = ok;
    checks.push_back(c);
  }

  {  // Second-moment construction, alpha = 2 (small verification budget).
    Check c{"construct_alpha2", false, Json::object()};
    SecondMomentTarget target;
    target.eps_tilde = 0.35;
    SecondMomentOptions opts;
    opts.verify_samples = 20000;
    auto [proc, rep] =
        construct_second_moment_process(1.0, 2.0, target, Rng::derive(seed, 5),
                                        opts);
    c.details["achieved_rate"] = rep.achieved_rate;
    c.details["target_rate"] = rep.target_rate;
    c.details["lag0_z"] = rep.z.lag0_z;
    c.details["mean_z"] = rep.z.mean_z;
    c.details["max_cross_z"] = rep.z.max_cross_z;
    c.pass = rep.achieved_rate >= rep.target_rate &&
             std::abs(proc.second_moment() - 1.0) < 1e-12 &&
             rep.z.mean_z <= 4.0 && rep.z.lag0_z <= 4.0 &&
             rep.z.max_cross_z <= 4.0;
    checks.push_back(c);
  }

  {  // Burg: fit, constraint verification, sandwich scaling.
    Check c{"burg_fit_simulate_sandwich", false, Json::object()};
    const AutocovSpec spec({1.0, 0.5, 0.25});
    auto model = levinson_durbin(spec);
    spectral_init(model);
    const auto ens = simulate_ar(model, gaussian_innovations(model.sigma2),
                                 50, 20000, Rng::derive(seed, 6));
    const auto rep = verify_burg_constraints(ens, spec, 4.0);
    std::vector<double> q;
    for (const auto& atom : model.spectral) q.push_back(atom.q);
    double expected_gap = kInf;
    for (double qi : q)
      expected_gap = std::min(expected_gap, 2.0 / (1.0 - 2.0) * std::log(qi));
    bool scaling_ok = true;
    for (int n : {5, 10, 20, 40}) {
      const auto sw = renyi_rate_sandwich(0.0, q, 2.0, n);
      scaling_ok = scaling_ok &&
                   std::abs(sw.gap - expected_gap) < 1e-12 &&
                   std::abs((sw.upper - sw.lower) / n - expected_gap / n) <
                       1e-12;
    }
    c.details["worst_z"] = rep.worst_z;
    c.details["sandwich_gap"] = expected_gap;
    c.details["scaling_ok"] = scaling_ok;
    c.pass = rep.pass && scaling_ok;
    checks.push_back(c);
  }

  return checks;
}

// --- subcommand runners -------------------------------------------------------

int run_entropy_cmd(const std::string& density_path, double alpha,
                    const std::string& output) {
  const auto f = grid_from_json(load_json(density_path));
  const EntropyValue e =
      alpha == 1.0 ? shannon_entropy(f) : renyi_entropy(f, alpha);
  emit(to_json(e).dump(2) + "\n", output);
  return kExitOk;
}

int run_maxent_cmd(const CostFlags& flags, const std::vector<double>& gammas,
                   const std::string& output) {
  if (!gammas.empty()) {
    const auto pts = hstar_curve(make_cost(flags), gammas);
    std::string csv = "gamma,hstar_nats\n";
    for (const auto& p : pts)
      csv += csv_cell(p.gamma) + "," + csv_cell(p.hstar) + "\n";
    emit(csv, output);
    return kExitOk;
  }
  const auto point = solve_hstar_point(make_cost(flags));
  Json j;
  j["lambda0"] = point.lambda0;
  j["lambda1"] = point.lambda1;
  j["hstar"] = point.hstar;
  j["pinned_uniform"] = point.pinned_uniform;
  emit(j.dump(2) + "\n", output);
  return kExitOk;
}

int run_truncate_cmd(const std::string& density_path, const std::string& m_arg,
                     double eps, const CostFlags& flags,
                     const std::string& output) {
  const auto f = grid_from_json(load_json(density_path));
  CostFlags cf = flags;
  cf.cells = f.size();
  cf.support = {f.lo(), f.hi()};
  const auto cost = make_cost(cf);
  const double M = m_arg == "auto" ? pick_M(f, cost, eps) : std::stod(m_arg);
  const auto [g, rep] = truncate_bound(f, cost, M);
  Json j;
  j["M"] = rep.M;
  j["beta"] = rep.beta;
  j["cost_before"] = rep.cost_before;
  j["cost_after"] = rep.cost_after;
  j["h_before"] = rep.h_before;
  j["h_after"] = rep.h_after;
  j["density"] = to_json(g);
  emit(j.dump(2) + "\n", output);
  return kExitOk;
}

int run_typical_build_cmd(const std::string& density_path, int n, double eps,
                          const CostFlags& flags, const std::string& output) {
  const auto f = grid_from_json(load_json(density_path));
  CostFlags cf = flags;
  cf.cells = f.size();
  cf.support = {f.lo(), f.hi()};
  const TypicalSpec spec(f, n, eps, make_cost(cf));
  const auto block = TypicalBlockDensity::build(spec);
  Json j;
  j["log_volume"] = block.log_volume();
  j["n_threshold_ok"] = block.card_bound_ok();
  j["mode"] =
      block.mode() == SamplerMode::kEnumerate ? "enumerate" : "rejection";
  if (block.mode() == SamplerMode::kEnumerate) {
    j["member_classes"] = block.member_class_count();
    j["exact_mass"] = block.exact_mass();
  }
  emit(j.dump(2) + "\n", output);
  return kExitOk;
}

int run_mixture_bounds_cmd(const std::string& spec_path, double alpha,
                           const std::string& output) {
  const auto j = load_json(spec_path);
  std::vector<GridDensity> comps;
  for (const auto& cj : j.at("components")) comps.push_back(grid_from_json(cj));
  // Heterogeneous supports are embedded in one covering grid first.
  bool shared = true;
  for (std::size_t i = 1; i < comps.size(); ++i)
    shared = shared && comps[i].same_grid(comps[0]);
  if (!shared) comps = embed_on_common_grid(comps);
  const MixtureSpec m(std::move(comps),
                      j.at("weights").get<std::vector<double>>());
  Json out;
  out["lower"] = mixture_lower_bound(m, alpha);
  out["exact"] = mixture_entropy(m, alpha).nats;
  out["upper"] = mixture_upper_bound(m, alpha);
  emit(out.dump(2) + "\n", output);
  return kExitOk;
}

int run_stationarize_cmd(const std::string& block_path, double alpha,
                         const std::vector<int>& ms,
                         const std::string& output) {
  const auto block =
      TypicalBlockDensity::build(typical_spec_from_json(load_json(block_path)));
  const auto stats = make_block_stats(block, alpha);
  if (ms.size() == 1) {
    const auto rep = window_rate_bounds(stats, ms[0]);
    Json j;
    j["m"] = rep.m;
    j["lower"] = rep.lower;
    j["upper"] = rep.upper;
    j["block_rate"] = rep.block_rate;
    j["degenerate_shifts"] = rep.degenerate_ts;
    emit(j.dump(2) + "\n", output);
    return kExitOk;
  }
  std::string csv = "m,lower,upper,block_rate\n";
  for (int m : ms) {
    const auto rep = window_rate_bounds(stats, m);
    csv += std::to_string(rep.m) + "," + csv_cell(rep.lower) + "," +
           csv_cell(rep.upper) + "," + csv_cell(rep.block_rate) + "\n";
  }
  emit(csv, output);
  return kExitOk;
}

int run_construct_cmd(const ConstructFlags& flags, const std::string& output) {
  auto [proc, rep] = run_construct(flags);
  Json j;
  j["descriptor"] = construct_descriptor(flags);
  j["report"] = second_moment_report_json(rep);
  const bool ok =
      rep.z.mean_z <= 3.0 && rep.z.lag0_z <= 3.0 && rep.z.max_cross_z <= 3.0;
  j["verification_pass"] = ok;
  emit(j.dump(2) + "\n", output);
  return ok ? kExitOk : kExitVerifyFailed;
}

int run_burg_fit_cmd(const std::vector<double>& alphas,
                     const std::string& output) {
  const AutocovSpec spec(alphas);
  auto model = levinson_durbin(spec);
  spectral_init(model);
  emit(to_json(model).dump(2) + "\n", output);
  return kExitOk;
}

int run_burg_simulate_cmd(const std::string& model_path,
                          const std::string& innovations, int reps,
                          int horizon, std::uint64_t seed, double tol_sigmas,
                          const std::string& output) {
  auto model = armodel_from_json(load_json(model_path));
  if (model.p() > 0 && model.spectral.empty()) spectral_init(model);
  std::vector<double> alphas;
  // The verification targets come from the model's Toeplitz minor plus
  // sigma2 via the Yule-Walker identity alpha_0 row; the caller usually has
  // the original alphas, which equal Kp's first row extended by the model.
  if (!model.Kp.empty()) {
    alphas = model.Kp[0];
    double alpha_p = model.sigma2 * 0.0;
    // alpha_p = a^T reversed(first row shifted) ... recover from Yule-Walker:
    // alpha_p = sum_k a_k alpha_{p-k}.
    const int p = model.p();
    alpha_p = 0.0;
    for (int k = 1; k <= p; ++k)
      alpha_p += model.a[std::size_t(k - 1)] * alphas[std::size_t(p - k)];
    alphas.push_back(alpha_p);
  } else {
    alphas = {model.sigma2};
  }
  const AutocovSpec spec(alphas);

  InnovationSource source;
  std::optional<BlockProcess> block_proc;
  if (innovations == "gauss") {
    source = gaussian_innovations(model.sigma2);
  } else if (innovations.rfind("block:", 0) == 0) {
    block_proc = process_from_descriptor(load_json(innovations.substr(6)));
    if (std::abs(block_proc->second_moment() - model.sigma2) > 1e-9)
      throw ValidationError(
          "burg simulate: block innovation variance differs from sigma2");
    source = [&](int len, Rng& rng) {
      return block_proc->sample_window(len, rng);
    };
  } else {
    throw ValidationError("--innovations must be gauss or block:<file>");
  }

  const auto ens = simulate_ar(model, source, horizon, reps, seed);
  const auto rep = verify_burg_constraints(ens, spec, tol_sigmas);
  Json j;
  j["alphas"] = alphas;
  j["reps"] = reps;
  j["horizon"] = horizon;
  j["seed"] = seed;
  j["tol_sigmas"] = tol_sigmas;
  j["worst_z"] = rep.worst_z;
  Json rows = Json::array();
  for (const auto& row : rep.rows) {
    Json r;
    r["k"] = row.k;
    r["i"] = row.i;
    r["mean"] = row.mean;
    r["std_error"] = row.std_error;
    r["target"] = row.target;
    r["zscore"] = row.zscore;
    r["pass"] = row.pass;
    rows.push_back(r);
  }
  j["rows"] = rows;
  j["pass"] = rep.pass;
  emit(j.dump(2) + "\n", output);
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

int run_burg_sandwich_cmd(const std::string& model_path, double alpha, int n,
                          std::optional<double> hz,
                          const std::string& output) {
  auto model = armodel_from_json(load_json(model_path));
  if (model.p() > 0 && model.spectral.empty()) spectral_init(model);
  std::vector<double> q;
  for (const auto& atom : model.spectral) q.push_back(atom.q);
  // Default innovation block entropy: the Gaussian stand-in.
  const double hz_val =
      hz ? *hz : n * gauss_markov_shannon_rate(model.sigma2);
  const auto rep = renyi_rate_sandwich(hz_val, q, alpha, n);
  Json j;
  j["n"] = rep.n;
  j["hZ"] = rep.hZ;
  j["lower"] = rep.lower;
  j["upper"] = rep.upper;
  j["gap"] = rep.gap;
  j["rate_gap"] = rep.gap / n;
  emit(j.dump(2) + "\n", output);
  return kExitOk;
}

int run_verify_all_cmd(const std::string& suite, std::uint64_t seed,
                       const std::string& output) {
  if (suite != "desk")
    throw ValidationError("verify-all: unknown suite " + suite);
  bool all_pass = false;
  const Json j = checks_to_json(suite, seed, run_desk_suite(seed), &all_pass);
  emit(j.dump(2) + "\n", output);
  return all_pass ? kExitOk : kExitVerifyFailed;
}

// Expands --config file.json into ordinary flags appended after the
// subcommand tokens (explicit flags win, since CLI11 takes the last value).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      config_path = args[i + 1];
      args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
      break;
    }
  }
  if (config_path.empty()) return args;
  const Json cfg = load_json(config_path);
  std::vector<std::string> expanded;
  std::size_t insert_at = 0;
  // Keep subcommand names (non-flag tokens) in front.
  while (insert_at < args.size() && !args[insert_at].empty() &&
         args[insert_at][0] != '-')
    ++insert_at;
  expanded.assign(args.begin(), args.begin() + long(insert_at));
  for (const auto& [key, value] : cfg.items()) {
    expanded.push_back("--" + key);
    if (value.is_boolean()) {
      if (!value.get<bool>()) expanded.pop_back();
      continue;
    }
    if (value.is_string())
      expanded.push_back(value.get<std::string>());
    else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ",";
        joined += v.dump();
      }
      expanded.push_back(joined);
    } else {
      expanded.push_back(value.dump());
    }
  }
  expanded.insert(expanded.end(), args.begin() + long(insert_at), args.end());
  return expanded;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "renyi_lab: maximum Renyi-rate constructions under cost and "
      "autocovariance constraints"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string output;
  const auto add_output = [&output](CLI::App* cmd) {
    cmd->add_option("--output", output, "write the report to a file");
  };

  // entropy
  {
    auto* cmd = app.add_subcommand("entropy", "entropy of a grid density");
    auto density = std::make_shared<std::string>();
    auto alpha = std::make_shared<double>(2.0);
    cmd->add_option("--density", *density, "density JSON {lo,hi,weights}")
        ->required();
    cmd->add_option("--alpha", *alpha, "order (1 = Shannon)");
    add_output(cmd);
    cmd->callback([&, density, alpha] {
      action = [&, density, alpha] {
        return run_entropy_cmd(*density, *alpha, output);
      };
    });
  }

  // maxent
  {
    auto* cmd = app.add_subcommand(
        "maxent", "solve sup h(f) s.t. E[r] <= Gamma; curve mode with "
                  "--gammas emits CSV");
    auto flags = std::make_shared<CostFlags>();
    auto gammas = std::make_shared<std::vector<double>>();
    add_cost_flags(cmd, flags.get());
    cmd->add_option("--gammas", *gammas, "budget grid for curve mode")
        ->delimiter(',');
    add_output(cmd);
    cmd->callback([&, flags, gammas] {
      action = [&, flags, gammas] {
        return run_maxent_cmd(*flags, *gammas, output);
      };
    });
  }

  // truncate
  {
    auto* cmd = app.add_subcommand(
        "truncate", "cap a density at level M (auto picks the dyadic M)");
    auto density = std::make_shared<std::string>();
    auto m_arg = std::make_shared<std::string>("auto");
    auto eps = std::make_shared<double>(0.01);
    auto flags = std::make_shared<CostFlags>();
    flags->kind = "linear";
    cmd->add_option("--density", *density)->required();
    cmd->add_option("--M", *m_arg, "cap level or 'auto'");
    cmd->add_option("--eps", *eps, "mass/cost slack for auto M");
    add_cost_flags(cmd, flags.get());
    add_output(cmd);
    cmd->callback([&, density, m_arg, eps, flags] {
      action = [&, density, m_arg, eps, flags] {
        return run_truncate_cmd(*density, *m_arg, *eps, *flags, output);
      };
    });
  }

  // typical build
  {
    auto* cmd = app.add_subcommand("typical", "typical-set machinery");
    auto* build = cmd->add_subcommand("build", "build a typical block");
    auto density = std::make_shared<std::string>();
    auto n = std::make_shared<int>(10);
    auto eps = std::make_shared<double>(0.1);
    auto flags = std::make_shared<CostFlags>();
    flags->kind = "linear";
    build->add_option("--density", *density)->required();
    build->add_option("--n", *n, "block length");
    build->add_option("--eps", *eps, "typicality slack");
    add_cost_flags(build, flags.get());
    add_output(build);
    build->callback([&, density, n, eps, flags] {
      action = [&, density, n, eps, flags] {
        return run_typical_build_cmd(*density, *n, *eps, *flags, output);
      };
    });
    cmd->require_subcommand(1);
  }

  // mixture bounds
  {
    auto* cmd = app.add_subcommand("mixture", "mixture entropy machinery");
    auto* bounds = cmd->add_subcommand(
        "bounds", "lower / exact / upper order-alpha entropy of a mixture");
    auto spec = std::make_shared<std::string>();
    auto alpha = std::make_shared<double>(2.0);
    bounds->add_option("--spec", *spec,
                       "mixture JSON {components: [...], weights: [...]}")
        ->required();
    bounds->add_option("--alpha", *alpha);
    add_output(bounds);
    bounds->callback([&, spec, alpha] {
      action = [&, spec, alpha] {
        return run_mixture_bounds_cmd(*spec, *alpha, output);
      };
    });
    cmd->require_subcommand(1);
  }

  // stationarize
  {
    auto* cmd = app.add_subcommand(
        "stationarize",
        "window entropy bounds for the shifted block process");
    auto block = std::make_shared<std::string>();
    auto alpha = std::make_shared<double>(2.0);
    auto ms = std::make_shared<std::vector<int>>();
    cmd->add_option("--block", *block,
                    "block JSON {density, n, eps, cost}")
        ->required();
    cmd->add_option("--alpha", *alpha);
    cmd->add_option("--m", *ms, "window length(s); several emit CSV")
        ->delimiter(',')
        ->required();
    add_output(cmd);
    cmd->callback([&, block, alpha, ms] {
      action = [&, block, alpha, ms] {
        return run_stationarize_cmd(*block, *alpha, *ms, output);
      };
    });
  }

  // construct
  {
    auto* cmd = app.add_subcommand(
        "construct",
        "centered uncorrelated process with prescribed variance and high "
        "Renyi rate");
    auto flags = std::make_shared<ConstructFlags>();
    cmd->add_option("--sigma2", flags->sigma2)->capture_default_str();
    cmd->add_option("--alpha", flags->alpha)->capture_default_str();
    auto eps_tilde = std::make_shared<double>();
    auto target_rate = std::make_shared<double>();
    auto* e = cmd->add_option("--eps-tilde", *eps_tilde,
                              "rate slack target (alpha > 1)");
    auto* t = cmd->add_option("--target-rate", *target_rate,
                              "rate floor (alpha < 1)");
    cmd->add_option("--seed", flags->seed)->capture_default_str();
    cmd->add_option("--verify-samples", flags->verify_samples)
        ->capture_default_str();
    add_output(cmd);
    cmd->callback([&, flags, eps_tilde, target_rate, e, t] {
      action = [&, flags, eps_tilde, target_rate, e, t] {
        ConstructFlags f = *flags;
        if (e->count()) f.eps_tilde = *eps_tilde;
        if (t->count()) f.target_rate = *target_rate;
        return run_construct_cmd(f, output);
      };
    });
  }

  // burg
  {
    auto* cmd = app.add_subcommand(
        "burg", "autocovariance-constrained process machinery");
    cmd->require_subcommand(1);

    auto* fit = cmd->add_subcommand("fit", "Levinson-Durbin fit");
    auto alphas = std::make_shared<std::vector<double>>();
    fit->add_option("--alphas", *alphas, "alpha_0,...,alpha_p")
        ->delimiter(',')
        ->required();
    add_output(fit);
    fit->callback([&, alphas] {
      action = [&, alphas] { return run_burg_fit_cmd(*alphas, output); };
    });

    auto* sim = cmd->add_subcommand("simulate",
                                    "simulate and verify the constraints");
    auto model = std::make_shared<std::string>();
    auto innov = std::make_shared<std::string>("gauss");
    auto reps = std::make_shared<int>(100000);
    auto horizon = std::make_shared<int>(50);
    auto seed = std::make_shared<std::uint64_t>(7);
    auto tol = std::make_shared<double>(4.0);
    sim->add_option("--model", *model, "ARModel JSON from burg fit")
        ->required();
    sim->add_option("--innovations", *innov, "gauss | block:<descriptor>");
    sim->add_option("--reps", *reps);
    sim->add_option("--horizon", *horizon);
    sim->add_option("--seed", *seed);
    sim->add_option("--tol-sigmas", *tol);
    add_output(sim);
    sim->callback([&, model, innov, reps, horizon, seed, tol] {
      action = [&, model, innov, reps, horizon, seed, tol] {
        return run_burg_simulate_cmd(*model, *innov, *reps, *horizon, *seed,
                                     *tol, output);
      };
    });

    auto* sw = cmd->add_subcommand("sandwich",
                                   "window sandwich and its rate gap");
    auto sw_model = std::make_shared<std::string>();
    auto sw_alpha = std::make_shared<double>(2.0);
    auto sw_n = std::make_shared<int>(20);
    auto sw_hz = std::make_shared<double>();
    sw->add_option("--model", *sw_model)->required();
    sw->add_option("--alpha", *sw_alpha);
    sw->add_option("--n", *sw_n);
    auto* hz_opt =
        sw->add_option("--hz", *sw_hz, "innovation block entropy h_a(Z_1^n)");
    add_output(sw);
    sw->callback([&, sw_model, sw_alpha, sw_n, sw_hz, hz_opt] {
      action = [&, sw_model, sw_alpha, sw_n, sw_hz, hz_opt] {
        std::optional<double> hz;
        if (hz_opt->count()) hz = *sw_hz;
        return run_burg_sandwich_cmd(*sw_model, *sw_alpha, *sw_n, hz, output);
      };
    });
  }

  // verify-all
  {
    auto* cmd = app.add_subcommand("verify-all",
                                   "run the deterministic check suite");
    auto suite = std::make_shared<std::string>("desk");
    auto seed = std::make_shared<std::uint64_t>(7);
    cmd->add_option("--suite", *suite)->capture_default_str();
    cmd->add_option("--seed", *seed)->capture_default_str();
    add_output(cmd);
    cmd->callback([&, suite, seed] {
      action = [&, suite, seed] {
        return run_verify_all_cmd(*suite, *seed, output);
      };
    });
  }

  try {
    const auto args = expand_config(argc, argv);
    std::vector<std::string> rargs(args.rbegin(), args.rend());
    app.parse(rargs);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return action();
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
