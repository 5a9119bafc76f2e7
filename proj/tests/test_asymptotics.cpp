#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <walkmax/asymptotics.hpp>
#include <walkmax/closed_form.hpp>

using namespace walkmax;

namespace {

// Independent oracle for the moment integrals: the alternating series
// int_0^inf b^(k-1)/cosh(b) db = 2 (k-1)! sum_{m>=0} (-1)^m / (2m+1)^k,
// summed directly with enough terms (plus Cesaro-style pair averaging to
// accelerate the k = 1 case, where the series converges slowly).
double integral_series_oracle(int k) {
  double fact = 1.0;
  for (int i = 2; i < k; ++i) fact *= i;
  // Pair consecutive partial sums to kill the leading 1/m tail.
  const long long M = 2000000;
  double s = 0.0;
  for (long long m = 0; m < M; ++m) {
    const double term = (m & 1 ? -1.0 : 1.0) / std::pow(2.0 * m + 1.0, k);
    s += term;
  }
  const double tail_mid =
      0.5 * ((M & 1 ? -1.0 : 1.0) / std::pow(2.0 * M + 1.0, k));
  return 2.0 * fact * (s + tail_mid);
}

}  // namespace

// ---------------------------------------------------------------------------
// moment integrals and limit constants
// ---------------------------------------------------------------------------

TEST_CASE("moment integral: closed values for low orders") {
  double err = 0.0;
  CHECK(std::fabs(moment_integral(1, &err) - M_PI / 2.0) <= 1e-13);
  CHECK(err <= 1e-9);
  const double catalan = 0.91596559417721902;
  CHECK(std::fabs(moment_integral(2) - 2.0 * catalan) <= 1e-12);
}

TEST_CASE("moment integral matches the alternating-series oracle") {
  for (int k : {1, 2, 3, 4}) {
    CAPTURE(k);
    CHECK(std::fabs(moment_integral(k) - integral_series_oracle(k)) <= 1e-6);
  }
}

TEST_CASE("moment integral rejects bad orders") {
  CHECK_THROWS_AS(moment_integral(0), std::invalid_argument);
  CHECK_THROWS_AS(moment_integral(-2), std::invalid_argument);
}

TEST_CASE("limit moments of the scaled maximum") {
  CHECK(std::fabs(limit_moment(1).value - std::sqrt(M_PI / 2.0)) <= 1e-12);
  const double catalan = 0.91596559417721902;
  CHECK(std::fabs(limit_moment(2).value - 2.0 * catalan) <= 1e-12);
  CHECK(std::fabs(limit_factorial_moment(1).value - std::sqrt(M_PI / 2.0)) <=
        1e-12);
  CHECK(std::fabs(limit_factorial_moment(2).value - catalan) <= 1e-12);
}

TEST_CASE("limiting constants table") {
  const LimitingConstants c = limiting_constants();
  CHECK(std::fabs(c.mean_position - std::sqrt(2.0 / M_PI)) <= 1e-14);
  CHECK(std::fabs(c.var_position - (1.0 - 2.0 / M_PI)) <= 1e-14);
  CHECK(std::fabs(c.mean_max - 1.2533141373155003) <= 1e-12);
  CHECK(std::fabs(c.second_moment_max - 1.8319311883544380) <= 1e-11);
  CHECK(std::fabs(c.var_max -
                  (c.second_moment_max - c.mean_max * c.mean_max)) <= 1e-14);
  // The two scaled variances bracket 0.261135 and 0.363380.
  CHECK(std::fabs(c.var_max - 0.26113486155) <= 1e-9);
  CHECK(std::fabs(c.var_position - 0.36338022763) <= 1e-9);
}

// ---------------------------------------------------------------------------
// Abel-limit route
// ---------------------------------------------------------------------------

TEST_CASE("Abel route recovers the first two limit moments") {
  const AbelReport r1 = abel_limit_estimate(1);
  CHECK(std::fabs(r1.value - std::sqrt(M_PI / 2.0)) <= 1e-6);
  const AbelReport r2 = abel_limit_estimate(2);
  const double catalan = 0.91596559417721902;
  CHECK(std::fabs(r2.value - catalan) <= 1e-5);
}

TEST_CASE("Abel route raw estimates increase toward the limit") {
  const AbelReport r = abel_limit_estimate(1);
  REQUIRE(r.estimates.size() == r.grid.size());
  for (std::size_t i = 1; i < r.estimates.size(); ++i) {
    CAPTURE(i);
    CHECK(r.estimates[i] > r.estimates[i - 1]);
  }
  CHECK(r.estimates.back() < std::sqrt(M_PI / 2.0));
}

TEST_CASE("Abel route rejects malformed grids") {
  CHECK_THROWS_AS(abel_limit_estimate(1, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(abel_limit_estimate(1, {0.9, 0.8}), std::invalid_argument);
  CHECK_THROWS_AS(abel_limit_estimate(1, {0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(abel_limit_estimate(1, {0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("Abel route reports divergence on a grid far from the limit") {
  CHECK_THROWS_AS(abel_limit_estimate(1, {0.02, 0.04, 0.06, 0.08}),
                  std::runtime_error);
}

// ---------------------------------------------------------------------------
// limiting density
// ---------------------------------------------------------------------------

TEST_CASE("limiting density: anchor values") {
  CHECK(std::fabs(limiting_density(1.0).density - 0.90676765516773117) <= 1e-14);
  // Deep in the resummed regime one term dominates: 2 sqrt(g) exp(-pi g / 4).
  const double g = 4.0;
  const double one_term = 2.0 * std::sqrt(g) * std::exp(-M_PI * g / 4.0);
  CHECK(std::fabs(limiting_density(g).density - one_term) <= 1e-10);
  CHECK(std::fabs(limiting_density(g).density - 0.17285567305508914) <= 1e-10);
}

TEST_CASE("limiting density: branch selection and agreement") {
  CHECK(limiting_density(0.99).branch == DensityBranch::direct);
  CHECK(limiting_density(1.0).branch == DensityBranch::resummed);
  CHECK(limiting_density(2.5).branch == DensityBranch::resummed);
  for (int i = 0; i <= 30; ++i) {
    const double g = 0.5 + 1.5 * i / 30.0;
    const double direct = limiting_density_branch(g, DensityBranch::direct).density;
    const double resummed =
        limiting_density_branch(g, DensityBranch::resummed).density;
    CAPTURE(g);
    REQUIRE(std::fabs(direct - resummed) <= 1e-13);
  }
}

TEST_CASE("limiting density: truncation bound is honest") {
  for (double g : {0.3, 0.7, 1.0, 1.8, 5.0}) {
    const ThetaPoint p = limiting_density(g);
    // Recompute with many more terms in the same branch by asking the other
    // branch (they agree to ~1e-15), then compare against the reported bound.
    const ThetaPoint other = limiting_density_branch(
        g, p.branch == DensityBranch::direct ? DensityBranch::resummed
                                             : DensityBranch::direct);
    CAPTURE(g);
    CHECK(std::fabs(p.density - other.density) <=
          p.truncation_bound + other.truncation_bound + 1e-14);
    CHECK(p.truncation_bound <= 1e-15 * std::max(1.0, p.density) + 1e-16);
  }
}

TEST_CASE("limiting density rejects non-positive arguments") {
  CHECK_THROWS_AS(limiting_density(0.0), std::invalid_argument);
  CHECK_THROWS_AS(limiting_density(-1.0), std::invalid_argument);
}

TEST_CASE("one-term bounds bracket the density with small relative width") {
  // The relative width alpha peaks at gamma = 1, where both branch formulas
  // give exactly 3 exp(-2 pi) = 0.0056023...; this grid includes that point.
  const double alpha_peak = 3.0 * std::exp(-2.0 * M_PI);
  for (int i = 0; i <= 60; ++i) {
    const double g = 0.05 * std::pow(400.0, i / 60.0);  // log grid [0.05, 20]
    const ThetaPoint p = limiting_density(g);
    const DensityBounds b = density_first_term_bounds(g);
    CAPTURE(g);
    REQUIRE(p.density <= b.upper * (1.0 + 1e-14));
    REQUIRE(p.density >= b.lower * (1.0 - 1e-14) - 1e-300);
    REQUIRE(b.alpha <= alpha_peak * (1.0 + 1e-12));
    REQUIRE(b.lower == Catch::Approx(b.upper * (1.0 - b.alpha)).margin(1e-300));
  }
}

// ---------------------------------------------------------------------------
// theta-series modular identity
// ---------------------------------------------------------------------------

TEST_CASE("theta identity holds across the gamma range") {
  for (double g : {0.05, 0.1, 0.5, 1.0, 2.0, 10.0, 20.0}) {
    const ThetaIdentity r = theta_identity_check(g);
    CAPTURE(g);
    REQUIRE(std::fabs(r.residual) <= 1e-13);
    REQUIRE(std::fabs(r.residual) <=
            1e-13 * std::max(std::fabs(r.lhs), 1e-300));
  }
}

TEST_CASE("theta identity is exact at the fixed point") {
  const ThetaIdentity r = theta_identity_check(1.0);
  CHECK(r.residual == 0.0);
  CHECK(r.lhs == r.rhs);
}

TEST_CASE("theta identity scaling between reciprocal points") {
  // lhs(g) = g^(3/2) * S(pi g) and rhs(g) = S(pi / g), so
  // lhs(4) = 8 * S(4 pi) = 8 * rhs(1/4), evaluated by the same code path.
  const ThetaIdentity at4 = theta_identity_check(4.0);
  const ThetaIdentity atq = theta_identity_check(0.25);
  CHECK(at4.lhs == 8.0 * atq.rhs);
}

// ---------------------------------------------------------------------------
// finite-size convergence to the limit law
// ---------------------------------------------------------------------------

TEST_CASE("finite-size law approaches the limiting density") {
  for (double g : {0.5, 1.0, 2.0}) {
    const ConvergenceReport r50 = finite_size_convergence(50, g);
    const ConvergenceReport r100 = finite_size_convergence(100, g);
    CAPTURE(g);
    CHECK(r50.gap <= 0.02);
    CHECK(r100.gap <= 0.6 * r50.gap);
  }
}

TEST_CASE("finite-size report: step count parity matches the level") {
  for (int a : {2, 5, 10, 33}) {
    for (double g : {0.5, 1.0, 3.0}) {
      const ConvergenceReport r = finite_size_convergence(a, g);
      CAPTURE(a, g);
      REQUIRE(((r.n ^ a) & 1) == 0);
      REQUIRE(r.n >= a);
      CHECK(std::fabs(r.finite - a * max_pmf(r.n, a)) <= 1e-15);
      CHECK(std::fabs(r.limit - limiting_density(g).density) <= 1e-15);
    }
  }
}

TEST_CASE("finite-size report rejects infeasible parameters") {
  CHECK_THROWS_AS(finite_size_convergence(1, 1.0), std::invalid_argument);
  // gamma so large that the step count would fall below the level itself.
  CHECK_THROWS_AS(finite_size_convergence(50, 1000.0), std::domain_error);
}
