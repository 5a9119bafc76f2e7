#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <walkmax/closed_form.hpp>
#include <walkmax/core_model.hpp>

#include "series_oracle.hpp"

using namespace walkmax;
namespace so = series_oracle;

namespace {

// DP-backed references used across sections.
std::vector<MaxDist> dp_max_laws(int n_max) {
  std::vector<MaxDist> out;
  JointTable t = initial_joint();
  for (int n = 1; n <= n_max; ++n) {
    out.push_back(marginal_max(t));
    if (n < n_max) t = step_joint(t);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// binomial coefficients and the position law
// ---------------------------------------------------------------------------

TEST_CASE("binomial coefficients match the Pascal recurrence") {
  std::vector<std::vector<BigInt>> pascal(31);
  for (int n = 0; n <= 30; ++n) {
    pascal[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
    for (int k = 0; k <= n; ++k) {
      CAPTURE(n, k);
      CHECK(binomial(n, k) == pascal[n][k]);
    }
  }
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(7, 9) == 0);
  CHECK(binomial(64, 32) == BigInt("1832624140942590534"));
}

TEST_CASE("position law: frozen examples") {
  CHECK(position_pmf(3, 3) == Dyadic(1, 2));
  CHECK(position_pmf(4, 0) == Dyadic(3, 3));  // 6/16
  CHECK(position_pmf(5, 2) == Dyadic::zero());
  CHECK(position_pmf(1, 1) == Dyadic::one());
  CHECK(position_pmf(2, 0) == Dyadic(1, 1));
}

TEST_CASE("position law equals the DP marginal exactly") {
  JointTable t = initial_joint();
  for (int n = 1; n <= 60; ++n) {
    const PosDist d = marginal_position(t);
    for (int x = 0; x <= n; ++x) {
      CAPTURE(n, x);
      REQUIRE(position_pmf(n, x) == d.at(x));
    }
    if (n < 60) t = step_joint(t);
  }
}

TEST_CASE("position law sums to one exactly at large n") {
  for (int n : {1, 2, 3, 50, 101, 256, 777, 1000}) {
    Dyadic total = Dyadic::zero();
    for (int x = n & 1; x <= n; x += 2) total += position_pmf(n, x);
    CAPTURE(n);
    CHECK(total == Dyadic::one());
  }
}

TEST_CASE("position moments: frozen examples and DP agreement") {
  CHECK(position_moments(1).mean == Dyadic::one());
  CHECK(position_moments(1).variance == Dyadic::zero());
  CHECK(position_moments(2).mean == Dyadic::one());
  CHECK(position_moments(2).variance == Dyadic::one());

  JointTable t = initial_joint();
  for (int n = 1; n <= 40; ++n) {
    const PosDist d = marginal_position(t);
    Dyadic m1 = Dyadic::zero(), m2 = Dyadic::zero();
    for (const auto& [x, p] : d.pmf) {
      m1 += p * static_cast<std::uint64_t>(x);
      m2 += p * static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(x);
    }
    const PositionMoments pm = position_moments(n);
    CAPTURE(n);
    REQUIRE(pm.mean == m1);
    REQUIRE(pm.second_moment == m2);
    REQUIRE(pm.variance == m2 - m1 * m1);
    if (n < 40) t = step_joint(t);
  }
}

TEST_CASE("scaled position moments approach their limits") {
  const PositionMoments pm = position_moments(10000);
  CHECK(std::fabs(pm.mean.to_double() / 100.0 - std::sqrt(2.0 / M_PI)) < 1e-4);
  CHECK(std::fabs(pm.variance.to_double() / 10000.0 - (1.0 - 2.0 / M_PI)) < 1e-4);
}

// ---------------------------------------------------------------------------
// generating functions
// ---------------------------------------------------------------------------

TEST_CASE("theta point: closed value and algebraic invariants") {
  const GfPoint g = gf_theta(0.6);
  CHECK(std::fabs(g.theta - 1.0 / 3.0) <= 1e-15);

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 100; ++i) {
    const double lam = u(rng);
    const GfPoint p = gf_theta(lam);
    CAPTURE(lam);
    REQUIRE(p.theta > 0.0);
    REQUIRE(p.theta < lam);
    REQUIRE(std::fabs(p.theta * p.theta_inv - 1.0) <= 1e-14);
    // theta solves t^2 - (2/lambda) t + 1 = 0, so t + 1/t = 2/lambda.
    REQUIRE(std::fabs(p.theta + p.theta_inv - 2.0 / lam) <=
            1e-13 * (2.0 / lam));
  }
}

TEST_CASE("theta matches its power series") {
  const so::Series th = so::theta(64);
  for (double lam : {0.1, 0.3, 0.5}) {
    long double acc = 0.0L, pw = 1.0L;
    for (std::size_t i = 0; i < th.len(); ++i, pw *= lam) acc += th[i] * pw;
    CAPTURE(lam);
    CHECK(std::fabs(static_cast<double>(acc) - gf_theta(lam).theta) <= 1e-14);
  }
}

TEST_CASE("level weights match the series oracle") {
  const so::Series th = so::theta(64);
  const GfPoint g = gf_theta(0.5);
  for (int a : {1, 2, 3, 6}) {
    const so::Series h = so::sech_half(th, a);
    long double acc = 0.0L, pw = 1.0L;
    for (std::size_t i = 0; i < h.len(); ++i, pw *= 0.5L) acc += h[i] * pw;
    CAPTURE(a);
    // sech_weight is 2 / (theta^-a + theta^a) = 2 H_a.
    CHECK(std::fabs(2.0 * static_cast<double>(acc) - sech_weight(g, a)) <= 1e-13);
  }
}

TEST_CASE("record-state generating function: closed form at level one") {
  for (double lam : {0.1, 0.4, 0.7, 0.95}) {
    CAPTURE(lam);
    CHECK(std::fabs(gf_hit_own_max(lam, 1) - lam / (1.0 - lam * lam / 2.0)) <=
          1e-13);
  }
}

TEST_CASE("record-state generating function: coefficients equal DP masses") {
  // Coefficient of lambda^n in gf_hit_own_max(lambda, a) is P_n(a, a).
  // gf_hit_own_max = (4 / lambda) H_{a+1}, so the coefficient at order n is
  // 4 * [lambda^(n+1)] H_{a+1}.
  const so::Series th = so::theta(64);
  JointTable t = initial_joint();
  std::vector<JointTable> tables;
  for (int n = 1; n <= 20; ++n) {
    tables.push_back(t);
    if (n < 20) t = step_joint(t);
  }
  for (int a : {1, 2, 3}) {
    const so::Series h = so::sech_half(th, a + 1);
    for (int n = 1; n <= 20; ++n) {
      const double coeff = 4.0 * static_cast<double>(h[static_cast<std::size_t>(n) + 1]);
      const double dp = tables[static_cast<std::size_t>(n) - 1].at(a, a).to_double();
      CAPTURE(a, n);
      REQUIRE(std::fabs(coeff - dp) <= 1e-12);
    }
  }
}

TEST_CASE("max-law generating function: coefficients equal DP masses") {
  const so::Series th = so::theta(64);
  const std::vector<MaxDist> laws = dp_max_laws(20);
  for (int a : {1, 2, 3, 4}) {
    const so::Series diff =
        so::sub(so::sech_half(th, a), so::sech_half(th, a + 1));
    const so::Series gf = so::cumulative(so::scale(diff, 2.0L));
    for (int n = 1; n <= 20; ++n) {
      const double dp = laws[static_cast<std::size_t>(n) - 1].at(a).to_double();
      CAPTURE(a, n);
      REQUIRE(std::fabs(static_cast<double>(gf[static_cast<std::size_t>(n)]) - dp) <=
              1e-12);
    }
  }
}

TEST_CASE("max-law generating function sums to lambda/(1-lambda) over levels") {
  const double lam = 0.7;
  const GfPoint g = gf_theta(lam);
  double acc = 0.0;
  const int A = 120;
  for (int a = 1; a <= A; ++a) acc += gf_max_marginal(lam, a);
  const double tail =
      2.0 * std::pow(g.theta, A + 1) / ((1.0 - g.theta) * (1.0 - lam));
  CHECK(std::fabs(acc - lam / (1.0 - lam)) <= tail + 1e-12);
}

TEST_CASE("two-variable generating function: boundary values") {
  for (double lam : {0.2, 0.5, 0.8}) {
    CAPTURE(lam);
    // z = 1 collapses to the level-summed value lambda/(1-lambda).
    const TailSum at_one = gf_double_q(lam, 1.0);
    CHECK(std::fabs(at_one.value - lam / (1.0 - lam)) <=
          at_one.tail_bound + 1e-12);
    // z = 0 annihilates every term: the maximum is never below one.
    const TailSum at_zero = gf_double_q(lam, 0.0);
    CHECK(std::fabs(at_zero.value) <= 1e-15);
  }
}

TEST_CASE("two-variable generating function equals its resummed closed form") {
  for (double lam : {0.3, 0.6}) {
    for (double z : {0.2, 0.5, 0.9}) {
      const GfPoint g = gf_theta(lam);
      // Closed form: lambda/(1-lambda) - (1-z)/(1-lambda) sum_a z^(a-1) s_a.
      double sum = 0.0;
      double zp = 1.0;
      const long long A = default_level_cutoff(g.theta) + 8;
      for (long long a = 1; a <= A; ++a, zp *= z)
        sum += zp * sech_weight(g, a);
      const double closed =
          lam / (1.0 - lam) - (1.0 - z) / (1.0 - lam) * sum;
      const TailSum direct = gf_double_q(lam, z);
      CAPTURE(lam, z);
      REQUIRE(std::fabs(direct.value - closed) <= direct.tail_bound + 1e-11);
    }
  }
}

TEST_CASE("two-variable generating function matches DP double sums") {
  const double lam = 0.25, z = 0.5;
  const std::vector<MaxDist> laws = dp_max_laws(60);
  double acc = 0.0, pw = lam;
  for (int n = 1; n <= 60; ++n, pw *= lam)
    for (const auto& [a, p] : laws[static_cast<std::size_t>(n) - 1].pmf)
      acc += pw * std::pow(z, a) * p.to_double();
  const TailSum direct = gf_double_q(lam, z);
  CHECK(std::fabs(direct.value - acc) <= direct.tail_bound + 1e-12);
}

TEST_CASE("factorial-moment generating function matches DP sums") {
  const double lam = 0.25;
  const std::vector<MaxDist> laws = dp_max_laws(60);
  double s1 = 0.0, s2 = 0.0, pw = lam;
  for (int n = 1; n <= 60; ++n, pw *= lam) {
    double ea = 0.0, ec2 = 0.0;
    for (const auto& [a, p] : laws[static_cast<std::size_t>(n) - 1].pmf) {
      const double q = p.to_double();
      ea += a * q;
      ec2 += 0.5 * (a + 1.0) * a * q;
    }
    s1 += pw * ea;
    s2 += pw * ec2;
  }
  // First order: sum_n lambda^n E(A_n).
  CHECK(std::fabs(factorial_moment_gf(lam, 1).value - s1) <= 1e-12);
  // Second order: sum_n lambda^n E C(A_n + 1, 2).
  CHECK(std::fabs(factorial_moment_gf(lam, 2).value - s2) <= 1e-12);
}

TEST_CASE("factorial-moment generating function is increasing in lambda") {
  double prev = 0.0;
  for (double lam : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const double v = factorial_moment_gf(lam, 1).value;
    CAPTURE(lam);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("derivative of the two-variable function at z=1 gives first moments") {
  const double lam = 0.25, h = 1e-5;
  const double deriv =
      (gf_double_q(lam, 1.0).value - gf_double_q(lam, 1.0 - h).value) / h;
  // d/dz at z=1 of sum z^a Q equals sum a Q = sum_n lambda^n E(A_n).
  CHECK(std::fabs(deriv - factorial_moment_gf(lam, 1).value) <= 1e-4);
}

// ---------------------------------------------------------------------------
// trigonometric route
// ---------------------------------------------------------------------------

TEST_CASE("trigonometric coefficients vanish off parity") {
  for (long long a : {1, 2, 3, 5}) {
    for (long long n = a; n <= a + 9; ++n) {
      if (((n - a) & 1) == 0) continue;
      CAPTURE(n, a);
      CHECK(sech_coef(n, a).value == 0.0);
    }
  }
}

TEST_CASE("trigonometric coefficients: frozen values and series oracle") {
  CHECK(std::fabs(sech_coef(1, 1).value - 0.5) <= 1e-15);
  CHECK(std::fabs(sech_coef(4, 2).value - 0.125) <= 1e-15);

  const so::Series th = so::theta(48);
  for (long long a : {1, 2, 3, 5, 8}) {
    const so::Series h = so::sech_half(th, static_cast<int>(a));
    for (long long n = 1; n <= 40; ++n) {
      CAPTURE(a, n);
      REQUIRE(std::fabs(sech_coef(n, a).value -
                        static_cast<double>(h[static_cast<std::size_t>(n)])) <=
              1e-12);
    }
  }
}

TEST_CASE("folded half-range sums equal the direct full-range sums") {
  for (long long b = 2; b <= 40; ++b) {
    for (long long E : {b - 1, b + 1, b + 7, b + 39}) {
      if (((b + E) & 1) == 0) continue;  // only the parity the law uses
      long double direct = 0.0L;
      for (long long j = 0; j < b; ++j) {
        const long double x = M_PIl * (2 * j + 1) / (2 * b);
        const long double term =
            detail::pow_cos(std::cos(x), E) / std::sin(x);
        direct += (j & 1) ? -term : term;
      }
      const long double folded = detail::folded_cos_power_sum(b, E);
      CAPTURE(b, E);
      REQUIRE(std::fabs(static_cast<double>(folded - direct)) <=
              1e-13 * std::max(1.0, std::fabs(static_cast<double>(direct))));
    }
  }
}

TEST_CASE("max law by trigonometric formula: frozen points") {
  CHECK(std::fabs(max_pmf(1, 1) - 1.0) <= 1e-14);
  CHECK(std::fabs(max_pmf(3, 2) - 0.25) <= 1e-14);
}

TEST_CASE("max law by trigonometric formula equals exact DP") {
  const std::vector<MaxDist> laws = dp_max_laws(24);
  for (int n = 1; n <= 24; ++n) {
    for (int a = 1; a <= n; ++a) {
      CAPTURE(n, a);
      REQUIRE(std::fabs(max_pmf(n, a) -
                        laws[static_cast<std::size_t>(n) - 1].at(a).to_double()) <=
              1e-12);
    }
  }
}

TEST_CASE("max law vanishes above the step count") {
  for (long long n : {5, 10, 17}) {
    for (long long a = n + 1; a <= n + 2; ++a) {
      CAPTURE(n, a);
      CHECK(std::fabs(max_pmf(n, a)) <= 1e-10);
    }
  }
}

TEST_CASE("max law sums to one across levels") {
  for (long long n : {10, 50, 200}) {
    double total = 0.0;
    for (long long a = 1; a <= n; ++a) total += max_pmf(n, a);
    CAPTURE(n);
    CHECK(std::fabs(total - 1.0) <= 1e-10);
  }
}

TEST_CASE("single-step increment of the max law") {
  CHECK(std::fabs(max_pmf_delta(1, 1) - 1.0) <= 1e-14);
  // The increment must reproduce Q_n(a) - Q_{n-1}(a), with Q_0 = 0.
  for (long long a : {1, 2, 3, 7}) {
    for (long long n = a; n <= 100; ++n) {
      const double prev = n == 1 ? 0.0 : max_pmf(n - 1, a);
      CAPTURE(n, a);
      REQUIRE(std::fabs(max_pmf_delta(n, a) - (max_pmf(n, a) - prev)) <= 1e-10);
    }
  }
}

TEST_CASE("single-step increment matches exact DP differences") {
  const std::vector<MaxDist> laws = dp_max_laws(40);
  for (int n = 2; n <= 40; ++n) {
    for (int a = 1; a <= n; ++a) {
      const double cur = laws[static_cast<std::size_t>(n) - 1].at(a).to_double();
      const double prev = laws[static_cast<std::size_t>(n) - 2].at(a).to_double();
      CAPTURE(n, a);
      REQUIRE(std::fabs(max_pmf_delta(n, a) - (cur - prev)) <= 1e-12);
    }
  }
}

TEST_CASE("first-passage law: frozen values and closed identity") {
  CHECK(std::fabs(first_passage_pmf(1, 1) - 1.0) <= 1e-14);
  CHECK(std::fabs(first_passage_pmf(3, 3) - 0.25) <= 1e-14);
  // Reaching level a for the first time at step n has probability
  // 2 * [lambda^n] H_a (zero off parity).
  for (long long a : {1, 2, 3, 6}) {
    for (long long n = a; n <= 40; ++n) {
      CAPTURE(n, a);
      REQUIRE(std::fabs(first_passage_pmf(n, a) - 2.0 * sech_coef(n, a).value) <=
              1e-12);
    }
  }
}

TEST_CASE("first-passage law matches exact DP record times") {
  // P(T_a = n) = P(A_n >= a) - P(A_{n-1} >= a).
  const std::vector<MaxDist> laws = dp_max_laws(30);
  for (int a = 1; a <= 8; ++a) {
    for (int n = 1; n <= 30; ++n) {
      const double cur =
          1.0 - laws[static_cast<std::size_t>(n) - 1].cdf(a - 1).to_double();
      const double prev =
          n == 1 ? 0.0
                 : 1.0 - laws[static_cast<std::size_t>(n) - 2].cdf(a - 1).to_double();
      CAPTURE(n, a);
      REQUIRE(std::fabs(first_passage_pmf(n, a) - (cur - prev)) <= 1e-12);
    }
  }
}

TEST_CASE("first-passage probabilities accumulate toward certainty") {
  double total = 0.0;
  for (long long n = 3; n <= 2000; n += 2) total += first_passage_pmf(n, 3);
  CHECK(total <= 1.0 + 1e-12);
  CHECK(total >= 0.98);
}

TEST_CASE("trigonometric moments: exact small cases and DP agreement") {
  const MaxLawMoments m3 = max_law_moments(3);
  CHECK(std::fabs(m3.total - 1.0) <= 1e-13);
  CHECK(std::fabs(m3.mean - 1.75) <= 1e-13);
  CHECK(std::fabs(m3.variance - 0.6875) <= 1e-13);

  const std::vector<MaxDist> laws = dp_max_laws(50);
  for (int n : {10, 50}) {
    double m1 = 0.0, m2 = 0.0;
    for (const auto& [a, p] : laws[static_cast<std::size_t>(n) - 1].pmf) {
      m1 += a * p.to_double();
      m2 += static_cast<double>(a) * a * p.to_double();
    }
    const MaxLawMoments m = max_law_moments(n);
    CAPTURE(n);
    CHECK(std::fabs(m.mean - m1) <= 1e-10);
    CHECK(std::fabs(m.second_moment - m2) <= 1e-9);
    CHECK(std::fabs(m.variance - (m2 - m1 * m1)) <= 1e-9);
  }
}
