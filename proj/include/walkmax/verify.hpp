#pragma once

// Cross-validation matrix: every analytic route checked against every other.
//
// Each check returns (name, pass, measured, bound) so callers can render a
// uniform report; `run_verification` assembles the quick matrix (seconds) or
// the full matrix (minutes: adds the 10^6-step moment sweep, the 500-step
// float DP, the 200-step exact sweeps, and the 10^6-trial simulation).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "walkmax/asymptotics.hpp"
#include "walkmax/closed_form.hpp"
#include "walkmax/core_model.hpp"
#include "walkmax/monte_carlo.hpp"

namespace walkmax {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0;  // the observed quantity
  double bound = 0;     // the contract it is held against
  std::string note;     // direction of the comparison or short context
};

namespace verify {

inline CheckResult leq(std::string name, double measured, double bound,
                       std::string note = "measured <= bound") {
  return {std::move(name), measured <= bound, measured, bound, std::move(note)};
}

inline CheckResult geq(std::string name, double measured, double bound,
                       std::string note = "measured >= bound") {
  return {std::move(name), measured >= bound, measured, bound, std::move(note)};
}

// --- core: recursion vs path enumeration (exact) ----------------------------

inline CheckResult oracle_equivalence(int n_max) {
  long long mismatches = 0;
  JointTable t = initial_joint();
  if (!(t == enumerate_paths(1))) ++mismatches;
  for (int n = 2; n <= n_max; ++n) {
    t = step_joint(t);
    if (!(t == enumerate_paths(n))) ++mismatches;
  }
  return leq("recursion equals path enumeration (exact, n <= " +
                 std::to_string(n_max) + ")",
             static_cast<double>(mismatches), 0.0, "mismatching n count");
}

// --- position law and moments (exact) ----------------------------------------

namespace detail {

// Closed-form position row via a running binomial (exact).
inline PosDist closed_position_row(int n) {
  PosDist d;
  d.n = n;
  if (n % 2 == 0) {
    const long long half = n / 2;
    BigInt c = binomial(n, half);
    d.pmf.emplace(0, Dyadic(c, n));
    for (long long h = 1; h <= half; ++h) {
      c *= half - h + 1;
      c /= half + h;
      d.pmf.emplace(2 * h, Dyadic(2 * c, n));
    }
  } else {
    const long long m = (n - 1) / 2;
    BigInt c = binomial(n, m);
    for (long long h = 0; h <= m; ++h) {
      if (h > 0) {
        c *= m - h + 1;
        c /= m + h + 1;
      }
      d.pmf.emplace(2 * h + 1, Dyadic(c, n - 1));
    }
  }
  return d;
}

}  // namespace detail

inline CheckResult position_law_closed_form(int n_max) {
  long long mismatches = 0;
  JointTable t = initial_joint();
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) t = step_joint(t);
    if (!(marginal_position(t) == detail::closed_position_row(n))) ++mismatches;
  }
  return leq("DP position marginal equals closed form (exact, n <= " +
                 std::to_string(n_max) + ")",
             static_cast<double>(mismatches), 0.0, "mismatching n count");
}

inline CheckResult position_moments_closed_form(int n_max) {
  long long mismatches = 0;
  for (int n = 2; n <= n_max; n += 2) {
    const PositionMoments m = position_moments(n);
    const BigInt central = binomial(n, n / 2);
    const Dyadic q(central, n);  // central probability C(n, n/2)/2^n
    const Dyadic mean_closed = q * static_cast<std::uint64_t>(n);
    const Dyadic var_closed =
        (Dyadic::one() - q * q * static_cast<std::uint64_t>(n)) *
        static_cast<std::uint64_t>(n);
    if (!(m.mean == mean_closed && m.variance == var_closed)) ++mismatches;
  }
  return leq(
      "position mean/variance equal the closed product forms (even n <= " +
          std::to_string(n_max) + ")",
      static_cast<double>(mismatches), 0.0, "mismatching n count");
}

inline std::vector<CheckResult> position_moment_limits(int n = 10000) {
  const PositionMoments m = position_moments(n);
  const double mean = m.mean.to_double() / std::sqrt(static_cast<double>(n));
  const double var = m.variance.to_double() / static_cast<double>(n);
  const double mean_lim = std::sqrt(2.0 / std::numbers::pi);
  const double var_lim = 1.0 - 2.0 / std::numbers::pi;
  return {
      leq("scaled position mean at n = " + std::to_string(n) +
              " within 1% of sqrt(2/pi)",
          std::fabs(mean / mean_lim - 1.0), 0.01, "relative deviation"),
      leq("scaled position variance at n = " + std::to_string(n) +
              " within 1% of 1 - 2/pi",
          std::fabs(var / var_lim - 1.0), 0.01, "relative deviation"),
  };
}

// --- law of the maximum: trigonometric formula vs DP -------------------------

inline CheckResult max_law_trig_vs_dp_exact(int n_max) {
  double worst = 0.0;
  JointTable t = initial_joint();
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) t = step_joint(t);
    const MaxDist d = marginal_max(t);
    for (int a = 1; a <= n; ++a) {
      const auto it = d.pmf.find(a);
      const double exact = it == d.pmf.end() ? 0.0 : it->second.to_double();
      const double diff = std::fabs(exact - max_pmf(n, a));
      if (diff > worst) worst = diff;
    }
  }
  return leq("trigonometric max law vs exact DP (all a, n <= " +
                 std::to_string(n_max) + ")",
             worst, 1e-12, "max abs difference");
}

inline CheckResult max_law_trig_vs_dp_float(int n) {
  const std::vector<double> dp = DenseJoint::evolve(n).max_marginal();
  double worst = 0.0;
  for (int a = 1; a <= n; ++a) {
    const double diff =
        std::fabs(dp[static_cast<std::size_t>(a)] - max_pmf(n, a));
    if (diff > worst) worst = diff;
  }
  return leq("trigonometric max law vs float DP at n = " + std::to_string(n),
             worst, 1e-10, "max abs difference");
}

inline CheckResult max_law_normalization(long long n) {
  const MaxLawMoments m = max_law_moments(n);
  return leq("trigonometric max law sums to 1 at n = " + std::to_string(n),
             std::fabs(m.total - 1.0), 1e-9, "abs deviation from 1");
}

// --- moment constants by quadrature ------------------------------------------

inline std::vector<CheckResult> moment_constants() {
  const LimitingConstants c = limiting_constants();
  return {
      leq("scaled max mean constant sqrt(pi/2) to 5 decimals",
          std::fabs(c.mean_max - 1.253314), 5e-6, "abs deviation from 1.253314"),
      leq("scaled max second-moment constant 2G to 5 decimals",
          std::fabs(c.second_moment_max - 1.831931), 5e-6,
          "abs deviation from 1.831931"),
      leq("scaled max variance constant to 5 decimals",
          std::fabs(c.var_max - 0.261130), 5e-6, "abs deviation from 0.261130"),
      leq("scaled position mean constant sqrt(2/pi)",
          std::fabs(c.mean_position - 0.797885), 5e-6,
          "abs deviation from 0.797885"),
  };
}

// --- finite-n moments of the maximum vs the constants -------------------------

inline std::vector<CheckResult> max_moment_convergence(long long n) {
  const MaxLawMoments m = max_law_moments(n);
  const double mean = m.mean / std::sqrt(static_cast<double>(n));
  const double var = m.variance / static_cast<double>(n);
  return {
      leq("scaled max mean at n = " + std::to_string(n) +
              " within 0.5% of 1.2533",
          std::fabs(mean / 1.2533 - 1.0), 0.005, "relative deviation"),
      leq("scaled max variance at n = " + std::to_string(n) +
              " within 2% of 0.26113",
          std::fabs(var / 0.26113 - 1.0), 0.02, "relative deviation"),
  };
}

// --- Abel route ----------------------------------------------------------------

inline std::vector<CheckResult> abel_route() {
  const AbelReport r1 = abel_limit_estimate(1);
  const AbelReport r2 = abel_limit_estimate(2);
  const double g = 0.91596559417721902;  // Catalan
  return {
      leq("Abel-limit route, first moment vs sqrt(pi/2)",
          std::fabs(r1.value - std::sqrt(std::numbers::pi / 2.0)), 1e-3,
          "abs deviation"),
      leq("Abel-limit route, second factorial moment vs Catalan",
          std::fabs(r2.value - g), 1e-3, "abs deviation"),
  };
}

// --- limiting density: branches, identity, bounds, convergence ----------------

inline CheckResult density_branch_agreement() {
  double worst = 0.0;
  for (int i = 0; i <= 30; ++i) {
    const double gamma = 0.5 + 1.5 * i / 30.0;
    const double d =
        limiting_density_branch(gamma, DensityBranch::direct).density;
    const double r =
        limiting_density_branch(gamma, DensityBranch::resummed).density;
    if (std::fabs(d - r) > worst) worst = std::fabs(d - r);
  }
  return leq("density branches agree on gamma in [0.5, 2]", worst, 1e-12,
             "max abs difference");
}

inline std::vector<double> log_gamma_grid(int points = 50, double lo = 0.05,
                                          double hi = 20.0) {
  std::vector<double> g;
  g.reserve(points);
  for (int i = 0; i < points; ++i)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  return g;
}

inline std::vector<CheckResult> theta_identity_grid() {
  double worst_abs = 0.0, worst_rel = 0.0;
  for (double gamma : log_gamma_grid()) {
    const ThetaIdentity t = theta_identity_check(gamma);
    if (t.residual > worst_abs) worst_abs = t.residual;
    const double rel = t.residual / std::max(std::fabs(t.lhs), 1e-300);
    if (rel > worst_rel) worst_rel = rel;
  }
  return {
      leq("theta-series modular identity, 50-point log grid [0.05, 20]",
          worst_abs, 1e-13, "max abs residual"),
      leq("theta-series modular identity, relative residual", worst_rel, 1e-13,
          "max residual / |lhs|"),
  };
}

inline std::vector<CheckResult> density_first_term_bracket() {
  // the one-term sandwich may be tight to the last bit, so allow 1e-14
  // relative slack on the comparisons themselves
  double worst = 0.0, worst_alpha = 0.0;
  for (double gamma : log_gamma_grid()) {
    const double d = limiting_density(gamma).density;
    const DensityBounds b = density_first_term_bounds(gamma);
    const double over = (d - b.upper) / b.upper;
    const double under = (b.lower - d) / b.upper;
    worst = std::max({worst, over, under});
    worst_alpha = std::max(worst_alpha, b.alpha);
  }
  return {
      leq("density between one-term bounds on the gamma grid", worst, 1e-14,
          "worst relative excursion outside [lower, upper]"),
      leq("one-term bracket width alpha never exceeds 0.0056", worst_alpha,
          0.0056, "max alpha"),
  };
}

inline std::vector<CheckResult> limit_law_gaps() {
  double worst_gap = 0.0, worst_ratio = 0.0;
  for (double gamma : {0.5, 1.0, 2.0}) {
    const double g50 = finite_size_convergence(50, gamma).gap;
    const double g100 = finite_size_convergence(100, gamma).gap;
    worst_gap = std::max(worst_gap, g50);
    worst_ratio = std::max(worst_ratio, g100 / g50);
  }
  return {
      leq("finite-size gap at level 50, gamma in {0.5, 1, 2}", worst_gap, 0.02,
          "max |a Q_n(a) - limit|"),
      leq("gap shrinks by >= 40% from level 50 to level 100", worst_ratio, 0.6,
          "max gap(100)/gap(50)"),
  };
}

inline CheckResult density_curve_supnorm(long long n = 10000) {
  // compare a * Q_n(a) against the limit curve along the gamma window [0.2, 5]
  const double pi = std::numbers::pi;
  const long long a_lo = static_cast<long long>(
      std::ceil(std::sqrt(0.2 * pi * static_cast<double>(n) / 2.0)));
  const long long a_hi = static_cast<long long>(
      std::floor(std::sqrt(5.0 * pi * static_cast<double>(n) / 2.0)));
  double worst = 0.0, sup = 0.0;
  for (long long a = a_lo; a <= a_hi; ++a) {
    const double gamma =
        2.0 * static_cast<double>(a) * static_cast<double>(a) / (pi * n);
    const double limit = limiting_density(gamma).density;
    const double finite = static_cast<double>(a) * max_pmf(n, a);
    sup = std::max(sup, limit);
    worst = std::max(worst, std::fabs(finite - limit));
  }
  return leq("limit curve matches a*Q_n(a) at n = " + std::to_string(n) +
                 " within 2% sup-norm",
             worst, 0.02 * sup, "sup |finite - limit| vs 2% of curve height");
}

// --- first passage -------------------------------------------------------------

inline std::vector<CheckResult> first_passage_checks() {
  double total = 0.0;
  for (long long n = 1; n <= 2000; ++n) total += first_passage_pmf(n, 3);
  return {
      leq("first passage to level 3 at step 3 equals 1/4",
          std::fabs(first_passage_pmf(3, 3) - 0.25), 1e-12, "abs deviation"),
      geq("first passage to level 3 within 2000 steps is near-certain", total,
          0.98, "total probability"),
  };
}

// --- Monte Carlo vs exact law ----------------------------------------------------

inline std::vector<CheckResult> mc_concordance(long long n, long long trials,
                                               std::uint64_t seed) {
  SimConfig cfg;
  cfg.n = n;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.workers = 1;
  const SimSummary one = run_simulation(cfg);
  cfg.workers = 3;
  const SimSummary three = run_simulation(cfg);
  const ChiSquared fit = chi_squared_against_max_law(one);
  const MaxLawMoments exact = max_law_moments(n);
  const double se = std::sqrt(one.var_a / static_cast<double>(trials));
  return {
      geq("simulated max histogram fits the exact law (chi-squared p)",
          fit.p_value, 0.001, "p-value"),
      leq("simulated mean max within 4 standard errors of exact",
          std::fabs(one.mean_a - exact.mean) / se, 4.0, "|deviation| / SE"),
      leq("summary is identical for 1 worker and 3 workers",
          one == three ? 0.0 : 1.0, 0.0, "0 iff bit-identical"),
  };
}

}  // namespace verify

// ---------------------------------------------------------------------------
// Assembled matrices
// ---------------------------------------------------------------------------

struct VerificationReport {
  std::string level;  // "quick" or "full"
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline VerificationReport run_verification(bool full,
                                           std::uint64_t seed = 42,
                                           int workers = 1) {
  (void)workers;  // results are worker-independent by contract
  VerificationReport rep;
  rep.level = full ? "full" : "quick";
  auto add = [&rep](CheckResult c) { rep.checks.push_back(std::move(c)); };
  auto add_all = [&rep](std::vector<CheckResult> cs) {
    for (auto& c : cs) rep.checks.push_back(std::move(c));
  };

  using namespace verify;
  add(oracle_equivalence(full ? 16 : 12));
  add(position_law_closed_form(full ? 200 : 40));
  add(position_moments_closed_form(full ? 200 : 40));
  if (full) add_all(position_moment_limits(10000));
  add(max_law_trig_vs_dp_exact(full ? 64 : 40));
  if (full) add(max_law_trig_vs_dp_float(500));
  add(max_law_normalization(full ? 10000 : 200));
  add_all(moment_constants());
  if (full) add_all(max_moment_convergence(1000000));
  add_all(abel_route());
  add(density_branch_agreement());
  add_all(theta_identity_grid());
  add_all(density_first_term_bracket());
  add_all(limit_law_gaps());
  if (full) add(density_curve_supnorm(10000));
  add_all(first_passage_checks());
  if (full)
    add_all(mc_concordance(1000, 1000000, seed));
  else
    add_all(mc_concordance(100, 100000, seed));
  return rep;
}

}  // namespace walkmax
