// Command-line front end: every analytic route of the library behind one
// uniform envelope (CSV / JSON / aligned table), plus a `verify` command that
// runs the cross-validation matrix and exits nonzero when any check fails.
//
// Exit codes: 0 success, 1 check failure, 2 usage error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <walkmax/walkmax.hpp>

namespace {

using namespace walkmax;

struct OutputOptions {
  std::string format = "table";
  std::string out_path;
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "table"}))
      ->capture_default_str();
  cmd->add_flag_callback(
      "--json", [&opts] { opts.format = "json"; }, "shorthand for --format json");
  cmd->add_flag_callback(
      "--csv", [&opts] { opts.format = "csv"; }, "shorthand for --format csv");
  cmd->add_option("--out", opts.out_path, "write output to a file instead of stdout");
}

void emit(const OutputEnvelope& env, const OutputOptions& opts) {
  std::string text;
  if (opts.format == "json")
    text = render_json(env).dump(2) + "\n";
  else if (opts.format == "csv")
    text = render_csv(env);
  else
    text = render_table(env);
  if (opts.out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream f(opts.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + opts.out_path);
    f << text;
  }
}

constexpr int kExactCap = 4096;  // largest n for exact-table commands
constexpr int kFloatCap = 8192;  // largest n for the dense double-precision DP

// ---------------------------------------------------------------------------
// dist: joint law and both marginals at one step count
// ---------------------------------------------------------------------------

int cmd_dist(int n, bool use_float, const OutputOptions& opts) {
  OutputEnvelope env;
  env.command = "dist";
  env.params = {{"n", std::to_string(n)}, {"mode", use_float ? "float" : "exact"}};
  env.columns = dist_columns();
  if (!use_float) {
    if (n > kExactCap)
      throw CLI::ValidationError(
          "dist", "n exceeds the exact-mode cap (" + std::to_string(kExactCap) +
                      "); pass --float for the dense double-precision table");
    const JointTable t = joint_distribution(n);
    append_joint_rows(env, t);
    append_position_rows(env, marginal_position(t));
    append_max_rows(env, marginal_max(t));
    const Dyadic total = t.total();
    env.checks.push_back({"joint normalization (exact)", total == Dyadic::one(),
                          total.to_double(), 1.0});
  } else {
    if (n > kFloatCap)
      throw CLI::ValidationError("dist", "n exceeds the float-mode cap (" +
                                             std::to_string(kFloatCap) + ")");
    const DenseJoint t = DenseJoint::evolve(n);
    double total = 0.0;
    // Same (x, a) ordering as the exact table's map iteration.
    for (int x = n & 1 ? 1 : 0; x <= n; x += 2)
      for (int a = x > 0 ? x : 1; a <= n; ++a) {
        const double v = t.at(x, a);
        if (v == 0.0) continue;
        total += v;
        env.rows.push_back({std::string("joint"), static_cast<long long>(n),
                            static_cast<long long>(x), static_cast<long long>(a),
                            std::monostate{}, std::monostate{}, v});
      }
    const std::vector<double> pos = t.position_marginal();
    for (int x = n & 1 ? 1 : 0; x <= n; x += 2)
      if (pos[static_cast<std::size_t>(x)] != 0.0)
        env.rows.push_back({std::string("position"), static_cast<long long>(n),
                            static_cast<long long>(x), std::monostate{},
                            std::monostate{}, std::monostate{},
                            pos[static_cast<std::size_t>(x)]});
    const std::vector<double> mx = t.max_marginal();
    for (int a = 1; a <= n; ++a)
      if (mx[static_cast<std::size_t>(a)] != 0.0)
        env.rows.push_back({std::string("max"), static_cast<long long>(n),
                            std::monostate{}, static_cast<long long>(a),
                            std::monostate{}, std::monostate{},
                            mx[static_cast<std::size_t>(a)]});
    env.checks.push_back(
        {"joint normalization (float)", std::fabs(total - 1.0) <= 1e-9, total, 1.0});
  }
  emit(env, opts);
  return env.all_checks_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// maxdist: law of the running maximum by either route
// ---------------------------------------------------------------------------

int cmd_maxdist(long long n, long long level, const std::string& route,
                const OutputOptions& opts) {
  OutputEnvelope env;
  env.command = "maxdist";
  env.params = {{"n", std::to_string(n)}, {"route", route}};
  if (level > 0) env.params.emplace_back("a", std::to_string(level));
  env.columns = {"n", "a", "q", "route", "numerator", "log2_denominator"};
  if (route == "dp") {
    if (n > kExactCap)
      throw CLI::ValidationError(
          "maxdist", "n exceeds the exact-mode cap (" + std::to_string(kExactCap) +
                         "); use --route trig");
    const MaxDist d = marginal_max(joint_distribution(static_cast<int>(n)));
    Dyadic total = Dyadic::zero();
    for (const auto& [a, p] : d.pmf) {
      if (level > 0 && a != level) continue;
      total += p;
      env.rows.push_back({n, static_cast<long long>(a), p.to_double(),
                          std::string("dp"), p.numerator(),
                          static_cast<long long>(p.log2_denominator())});
    }
    if (level > 0)
      env.checks.push_back({"level mass in the unit interval",
                            !(total > Dyadic::one()), total.to_double(), 1.0});
    else
      env.checks.push_back({"normalization (exact)", total == Dyadic::one(),
                            total.to_double(), 1.0});
  } else {
    if (n > 10000000)
      throw CLI::ValidationError("maxdist", "trig route supports n up to 1e7");
    long long a_lo = 1, a_hi = static_cast<long long>(10.0 * std::ceil(std::sqrt(
                                   static_cast<double>(n)))) +
                              64;
    if (a_hi > n) a_hi = n;
    if (level > 0) a_lo = a_hi = std::min(level, n);
    double total = 0.0;
    for (long long a = a_lo; a <= a_hi; ++a) {
      const double q = max_pmf(n, a);
      total += q;
      env.rows.push_back({n, a, q, std::string("trig"), std::monostate{},
                          std::monostate{}});
    }
    if (level > 0)
      env.checks.push_back({"level mass in the unit interval",
                            total >= -1e-12 && total <= 1.0 + 1e-12, total, 1.0});
    else
      env.checks.push_back(
          {"normalization (evaluated support)", std::fabs(total - 1.0) <= 1e-9,
           total, 1.0});
  }
  emit(env, opts);
  return env.all_checks_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// constants: the scaled-limit comparison table
// ---------------------------------------------------------------------------

int cmd_constants(const OutputOptions& opts) {
  const LimitingConstants c = limiting_constants();
  OutputEnvelope env;
  env.command = "constants";
  env.columns = {"constant", "value", "route", "meaning"};
  const auto row = [&env](const char* name, double v, const char* route,
                          const char* meaning) {
    env.rows.push_back({std::string(name), v, std::string(route),
                        std::string(meaning)});
  };
  row("mean_position_scaled", c.mean_position, "closed_form",
      "lim E(S_n)/sqrt(n) = sqrt(2/pi)");
  row("var_position_scaled", c.var_position, "closed_form",
      "lim Var(S_n)/n = 1 - 2/pi");
  row("mean_max_scaled", c.mean_max, "quadrature",
      "lim E(A_n)/sqrt(n) = sqrt(pi/2)");
  row("second_moment_max_scaled", c.second_moment_max, "quadrature",
      "lim E(A_n^2)/n = 2G");
  row("var_max_scaled", c.var_max, "quadrature", "lim Var(A_n)/n = 2G - pi/2");
  emit(env, opts);
  return 0;
}

// ---------------------------------------------------------------------------
// density: limiting density curve of the scaled maximum
// ---------------------------------------------------------------------------

int cmd_density(double gamma_min, double gamma_max, int steps, double gamma_at,
                const OutputOptions& opts) {
  OutputEnvelope env;
  env.command = "density";
  std::vector<double> gammas;
  if (gamma_at > 0.0) {
    gammas.push_back(gamma_at);
    env.params = {{"gamma", format_float(gamma_at)}};
  } else {
    if (!(gamma_min > 0.0 && gamma_max > gamma_min))
      throw CLI::ValidationError("density", "need 0 < gamma-min < gamma-max");
    if (steps < 2) throw CLI::ValidationError("density", "need at least 2 steps");
    for (int i = 0; i < steps; ++i)
      gammas.push_back(gamma_min * std::pow(gamma_max / gamma_min,
                                            static_cast<double>(i) / (steps - 1)));
    env.params = {{"gamma_min", format_float(gamma_min)},
                  {"gamma_max", format_float(gamma_max)},
                  {"steps", std::to_string(steps)}};
  }
  env.columns = {"gamma", "density", "branch", "lower_bound", "upper_bound"};
  double worst = 0.0;
  for (const double gamma : gammas) {
    const ThetaPoint p = limiting_density(gamma);
    const DensityBounds b = density_first_term_bounds(gamma);
    env.rows.push_back(
        {gamma, p.density,
         std::string(p.branch == DensityBranch::resummed ? "resummed" : "direct"),
         b.lower, b.upper});
    worst = std::max({worst, (p.density - b.upper) / b.upper,
                      (b.lower - p.density) / b.upper});
  }
  env.checks.push_back(
      {"one-term bounds bracket the density on every row", worst <= 1e-14, worst,
       1e-14});
  emit(env, opts);
  return env.all_checks_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate: seeded Monte Carlo with exact-law comparison columns
// ---------------------------------------------------------------------------

int cmd_simulate(long long n, long long trials, std::uint64_t seed, int workers,
                 const OutputOptions& opts) {
  SimConfig cfg;
  cfg.n = n;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.workers = workers;
  const SimSummary s = run_simulation(cfg);
  OutputEnvelope env;
  env.command = "simulate";
  env.params = {{"n", std::to_string(n)},
                {"trials", std::to_string(trials)},
                {"seed", std::to_string(seed)},
                {"workers", std::to_string(workers)},
                {"mean_s", format_float(s.mean_s)},
                {"var_s", format_float(s.var_s)},
                {"mean_a", format_float(s.mean_a)},
                {"var_a", format_float(s.var_a)},
                {"ci_reported", s.ci_reported ? "true" : "false"}};
  if (s.ci_reported) {
    env.params.emplace_back("ci99_halfwidth_mean_s",
                            format_float(s.ci_halfwidth_mean_s));
    env.params.emplace_back("ci99_halfwidth_mean_a",
                            format_float(s.ci_halfwidth_mean_a));
  }
  env.columns = {"a", "count", "empirical_prob", "exact_prob", "z_score"};
  const double t = static_cast<double>(trials);
  unsigned long long count_total = 0;
  for (const auto& [a, c] : s.hist_a) {
    const double q = max_pmf(n, a);
    const double se = std::sqrt(t * q * (1.0 - q));
    const double z = se > 0.0 ? (static_cast<double>(c) - t * q) / se : 0.0;
    env.rows.push_back({a, static_cast<unsigned long long>(c),
                        static_cast<double>(c) / t, q, z});
    count_total += c;
  }
  env.checks.push_back({"histogram counts sum to trials",
                        count_total == static_cast<unsigned long long>(trials),
                        static_cast<double>(count_total),
                        static_cast<double>(trials)});
  env.checks.push_back({"pathwise dominance: mean max >= mean position",
                        s.mean_a >= s.mean_s, s.mean_a - s.mean_s, 0.0});
  emit(env, opts);
  return env.all_checks_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify: the cross-validation matrix
// ---------------------------------------------------------------------------

int cmd_verify(const std::string& level, std::uint64_t seed, int workers,
               const OutputOptions& opts) {
  const VerificationReport rep = run_verification(level == "full", seed, workers);
  OutputEnvelope env;
  env.command = "verify";
  env.params = {{"level", rep.level}, {"seed", std::to_string(seed)}};
  env.columns = {"check", "result", "measured", "bound", "note"};
  for (const auto& c : rep.checks) {
    env.rows.push_back({c.name, std::string(c.pass ? "pass" : "fail"),
                        c.measured, c.bound, c.note});
    env.checks.push_back({c.name, c.pass, c.measured, c.bound});
  }
  emit(env, opts);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact, analytic, and Monte Carlo routes to the law of the running "
      "maximum of the reflected next-neighbor walk"};
  app.require_subcommand(1);

  OutputOptions opts;

  // dist
  auto* dist = app.add_subcommand(
      "dist", "joint law of (position, maximum) after n steps, with marginals");
  int dist_n = 0;
  bool dist_float = false;
  dist->add_option("--n", dist_n, "step count (n >= 1)")->required();
  dist->add_flag("--float", dist_float,
                 "dense double-precision tables instead of exact rationals");
  add_output_flags(dist, opts);

  // maxdist
  auto* maxdist =
      app.add_subcommand("maxdist", "law of the running maximum after n steps");
  long long maxdist_n = 0, maxdist_a = 0;
  std::string maxdist_route = "trig";
  maxdist->add_option("--n", maxdist_n, "step count (n >= 1)")->required();
  maxdist->add_option("--a", maxdist_a,
                      "restrict the output to one maximum level");
  maxdist->add_option("--route", maxdist_route,
                      "dp = exact dynamic program, trig = trigonometric formula")
      ->check(CLI::IsMember({"dp", "trig"}))
      ->capture_default_str();
  add_output_flags(maxdist, opts);

  // constants
  auto* constants = app.add_subcommand(
      "constants", "scaled limit constants of position and maximum");
  add_output_flags(constants, opts);

  // density
  auto* density = app.add_subcommand(
      "density", "limiting density of the scaled maximum over a gamma range");
  double gamma_min = 0.2, gamma_max = 5.0, gamma_at = 0.0;
  int density_steps = 25;
  density->add_option("--gamma-min", gamma_min, "lower end of the gamma range")
      ->capture_default_str();
  density->add_option("--gamma-max", gamma_max, "upper end of the gamma range")
      ->capture_default_str();
  density->add_option("--steps", density_steps, "number of log-spaced points")
      ->capture_default_str();
  density->add_option("--gamma", gamma_at,
                      "evaluate a single point instead of a range")
      ->check(CLI::PositiveNumber);
  add_output_flags(density, opts);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "seeded Monte Carlo of the walk with exact-law comparison");
  long long sim_n = 1000, sim_trials = 100000;
  std::uint64_t sim_seed = 42;
  int sim_workers = 1;
  simulate->add_option("--n", sim_n, "steps per walk")->capture_default_str();
  simulate->add_option("--trials", sim_trials, "number of walks")
      ->capture_default_str();
  simulate->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  simulate->add_option("--workers", sim_workers,
                       "parallelism degree (never affects results)")
      ->capture_default_str();
  add_output_flags(simulate, opts);

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "run the cross-validation matrix; exit 0 iff all checks pass");
  std::string verify_level = "quick";
  std::uint64_t verify_seed = 42;
  int verify_workers = 1;
  verify_cmd->add_option("--level", verify_level, "quick (seconds) or full (minutes)")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_seed, "RNG seed for the Monte Carlo leg")
      ->capture_default_str();
  verify_cmd->add_option("--workers", verify_workers, "parallelism degree")
      ->capture_default_str();
  add_output_flags(verify_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0; anything else is usage
  }

  try {
    if (dist->parsed()) {
      if (dist_n < 1)
        throw CLI::ValidationError("dist", "n must be >= 1");
      return cmd_dist(dist_n, dist_float, opts);
    }
    if (maxdist->parsed()) {
      if (maxdist_n < 1)
        throw CLI::ValidationError("maxdist", "n must be >= 1");
      if (maxdist->count("--a") && maxdist_a < 1)
        throw CLI::ValidationError("maxdist", "a must be >= 1");
      return cmd_maxdist(maxdist_n, maxdist_a, maxdist_route, opts);
    }
    if (constants->parsed()) return cmd_constants(opts);
    if (density->parsed())
      return cmd_density(gamma_min, gamma_max, density_steps, gamma_at, opts);
    if (simulate->parsed()) {
      if (sim_n < 1 || sim_trials < 1 || sim_workers < 1)
        throw CLI::ValidationError("simulate",
                                   "n, trials, and workers must be >= 1");
      return cmd_simulate(sim_n, sim_trials, sim_seed, sim_workers, opts);
    }
    if (verify_cmd->parsed())
      return cmd_verify(verify_level, verify_seed, verify_workers, opts);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
