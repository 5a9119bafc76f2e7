#pragma once

// Limit-regime evaluators for the running maximum of the reflected walk:
//
//  * the integrals I_k = int_0^inf b^{k-1}/cosh b db and the scaled moment
//    constants built from them,
//      lim n^{-k/2} E{C(A_n,k)} = I_k / (2^{k/2} (k/2)! (k-1)!)
//      lim n^{-k/2} E{A_n^k}    = k I_k / (2^{k/2} (k/2)!)
//    (limits in the Abel sense: lambda-smoothed, then lambda -> 1-),
//
//  * an independent Abel-limit route that evaluates the factorial-moment
//    generating function on a grid of lambda -> 1- and extrapolates,
//
//  * the limiting density of the scaled maximum in the variable
//    gamma = 2 a^2 / (pi N): the limit of a * P{A_N = a} with gamma fixed,
//    as a pair of dual theta-type series related by the modular
//    transformation (each fast where the other is slow),
//
//  * a high-precision self-consistency check of that modular identity, and
//    finite-size convergence reports of the exact law against the limit.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "walkmax/closed_form.hpp"

namespace walkmax {

// ---------------------------------------------------------------------------
// Moment constants by quadrature
// ---------------------------------------------------------------------------

// I_k = int_0^inf b^{k-1}/cosh b db, split at b = 1; the tail is mapped onto
// (0,1] by b = 1 - ln u, giving int_0^1 2 e (1 - ln u)^{k-1} / (e^2 + u^2) du
// (the logarithmic endpoint growth is handled by the tanh-sinh nodes).
// Known anchors: I_1 = pi/2, I_2 = 2G (G = Catalan), used in tests only.
inline double moment_integral(int k, double* abs_error = nullptr) {
  if (k < 1) throw std::invalid_argument("moment_integral: k must be >= 1");
  boost::math::quadrature::tanh_sinh<double> quad;
  double err_head = 0.0, err_tail = 0.0;
  const auto head = [k](double b) {
    return (k == 1 ? 1.0 : std::pow(b, k - 1)) / std::cosh(b);
  };
  const double head_val = quad.integrate(head, 0.0, 1.0, 1e-13, &err_head);
  const double e = std::exp(1.0), e2 = e * e;
  const auto tail = [k, e, e2](double u) {
    const double b = 1.0 - std::log(u);
    return 2.0 * e * (k == 1 ? 1.0 : std::pow(b, k - 1)) / (e2 + u * u);
  };
  const double tail_val = quad.integrate(tail, 0.0, 1.0, 1e-13, &err_tail);
  const double value = head_val + tail_val;
  // err_* are relative error estimates from the integrator
  const double abs_err =
      std::fabs(head_val) * err_head + std::fabs(tail_val) * err_tail;
  if (!(abs_err <= 1e-9 * std::fabs(value)))
    throw std::runtime_error("moment_integral: quadrature failed to converge");
  if (abs_error) *abs_error = abs_err;
  return value;
}

struct MomentReport {
  int k = 0;
  double value = 0;
  std::string route;  // "integral", "abel", or "finite_n"
  double error_estimate = 0;
};

// lim n^{-k/2} E{ C(A_n, k) } (Abel sense).
inline MomentReport limit_factorial_moment(int k) {
  double qerr = 0.0;
  const double integral = moment_integral(k, &qerr);
  const double denom = std::pow(2.0, 0.5 * k) * std::tgamma(0.5 * k + 1.0) *
                       std::tgamma(static_cast<double>(k));
  return {k, integral / denom, "integral", qerr / denom};
}

// lim n^{-k/2} E{ A_n^k } (Abel sense).
inline MomentReport limit_moment(int k) {
  double qerr = 0.0;
  const double integral = moment_integral(k, &qerr);
  const double denom = std::pow(2.0, 0.5 * k) * std::tgamma(0.5 * k + 1.0);
  return {k, k * integral / denom, "integral", k * qerr / denom};
}

// The five scaled constants reported side by side: position then maximum.
struct LimitingConstants {
  double mean_position = 0;      // lim E(S_n)/sqrt(n)   = sqrt(2/pi)
  double var_position = 0;       // lim Var(S_n)/n       = 1 - 2/pi
  double mean_max = 0;           // lim E(A_n)/sqrt(n)   = sqrt(pi/2)
  double second_moment_max = 0;  // lim E(A_n^2)/n       = 2G
  double var_max = 0;            // lim Var(A_n)/n       = 2G - pi/2
};

inline LimitingConstants limiting_constants() {
  const double pi = std::numbers::pi;
  LimitingConstants c;
  c.mean_position = std::sqrt(2.0 / pi);
  c.var_position = 1.0 - 2.0 / pi;
  c.mean_max = limit_moment(1).value;
  c.second_moment_max = limit_moment(2).value;
  c.var_max = c.second_moment_max - c.mean_max * c.mean_max;
  return c;
}

// ---------------------------------------------------------------------------
// Abel-limit route
// ---------------------------------------------------------------------------

struct AbelReport {
  int k = 0;
  double value = 0;           // extrapolated limit
  double error_estimate = 0;  // magnitude of the last extrapolation correction
  std::vector<double> grid;   // lambda values, increasing toward 1
  std::vector<double> estimates;  // pre-extrapolation values on the grid
};

// Evaluates ((1-lambda)/lambda)^{k/2} (1-lambda) F_k(lambda) / (k/2)! on the
// grid, where F_k is the factorial-moment generating function, then
// extrapolates to the limit.  The natural abscissa is t = -ln theta (so that
// cosh t - 1 = (1-lambda)/lambda): the grid values expand in powers of t,
// whereas in (1-lambda) odd k has half-integer powers and polynomial
// extrapolation stalls.  Converges to limit_factorial_moment(k).
inline AbelReport abel_limit_estimate(
    int k, std::vector<double> grid = {0.9, 0.99, 0.999, 0.9999}) {
  if (k < 1) throw std::invalid_argument("abel_limit_estimate: k must be >= 1");
  if (grid.size() < 2)
    throw std::invalid_argument("abel_limit_estimate: need >= 2 grid points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0))
      throw std::invalid_argument("abel_limit_estimate: grid must lie in (0,1)");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("abel_limit_estimate: grid must increase");
  }
  AbelReport rep;
  rep.k = k;
  rep.grid = grid;
  const double gk = std::tgamma(0.5 * k + 1.0);
  std::vector<long double> x, t;
  for (double lam : grid) {
    const GfPoint g = gf_theta(lam);
    const double raw = std::pow((1.0 - lam) / lam, 0.5 * k) * (1.0 - lam) *
                       factorial_moment_gf(lam, k).value / gk;
    rep.estimates.push_back(raw);
    x.push_back(-std::log(static_cast<long double>(g.theta)));
    t.push_back(raw);
  }
  // Neville tableau evaluated at t = 0; successive diagonal corrections must
  // shrink, otherwise the grid does not resolve the limit.
  const std::size_t m = x.size();
  long double prev_diag = t[0];
  long double prev_corr = 0.0L;
  for (std::size_t s = 1; s < m; ++s) {
    for (std::size_t i = 0; i + s < m; ++i)
      t[i] = (x[i + s] * t[i] - x[i] * t[i + 1]) / (x[i + s] - x[i]);
    const long double corr = std::fabs(t[0] - prev_diag);
    if (s >= 2 && corr > prev_corr)
      throw std::runtime_error(
          "abel_limit_estimate: extrapolation diverged (grid too coarse)");
    prev_diag = t[0];
    prev_corr = corr;
  }
  rep.value = static_cast<double>(t[0]);
  rep.error_estimate = static_cast<double>(prev_corr);
  return rep;
}

// ---------------------------------------------------------------------------
// Limiting density of the scaled maximum
// ---------------------------------------------------------------------------

enum class DensityBranch { direct, resummed };

struct ThetaPoint {
  double gamma = 0;    // 2 a^2 / (pi N), held fixed in the limit
  double density = 0;  // lim a * P{A_N = a}
  DensityBranch branch = DensityBranch::direct;
  long long terms_used = 0;
  double truncation_bound = 0;  // first omitted term
};

// Two dual series for the same density:
//   direct   : 2 sum_j (-1)^j ((2j+1)/gamma) exp(-(pi/(4 gamma)) (2j+1)^2)
//   resummed : 2 sqrt(gamma) sum_j (-1)^j (2j+1) exp(-(pi gamma/4) (2j+1)^2)
// The direct series converges fast for gamma < 1, the resummed one for
// gamma >= 1; they agree wherever both converge (modular transformation).
inline ThetaPoint limiting_density_branch(double gamma, DensityBranch branch) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("limiting_density: gamma must be > 0");
  ThetaPoint r;
  r.gamma = gamma;
  r.branch = branch;
  const long double pi = std::numbers::pi_v<long double>;
  const long double g = gamma;
  const bool resummed = branch == DensityBranch::resummed;
  const long double rate = resummed ? pi * g / 4.0L : pi / (4.0L * g);
  const long double scale = resummed ? 2.0L * std::sqrt(g) : 2.0L / g;
  detail::Kahan acc;
  long long j = 0;
  for (;; ++j) {
    const long double m = 2 * j + 1;
    const long double term = scale * m * std::exp(-rate * m * m);
    if (j > 0 && term < 1e-16L * std::fabs(acc.sum)) {
      r.truncation_bound = static_cast<double>(term);
      break;
    }
    acc.add((j & 1) ? -term : term);
    if (j > 10000)
      throw std::runtime_error("limiting_density: series failed to settle");
  }
  r.terms_used = j;
  r.density = acc.sum > 0.0L ? static_cast<double>(acc.sum) : 0.0;
  return r;
}

inline ThetaPoint limiting_density(double gamma) {
  return limiting_density_branch(
      gamma, gamma >= 1.0 ? DensityBranch::resummed : DensityBranch::direct);
}

// One-term sandwich for the density: the series alternates with decreasing
// terms, so  (1 - alpha) U <= density <= U  with U the first term and
// alpha = term2/term1 = 3 exp(-2 pi / gamma) (gamma <= 1, direct branch)
//       or                3 exp(-2 pi gamma) (gamma >= 1, resummed branch);
// alpha peaks at gamma = 1 where it is 3 e^{-2 pi} <= 0.0056.
struct DensityBounds {
  double lower = 0;
  double upper = 0;
  double alpha = 0;
};

inline DensityBounds density_first_term_bounds(double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("density_first_term_bounds: gamma must be > 0");
  const double pi = std::numbers::pi;
  DensityBounds b;
  if (gamma >= 1.0) {
    b.upper = 2.0 * std::sqrt(gamma) * std::exp(-pi * gamma / 4.0);
    b.alpha = 3.0 * std::exp(-2.0 * pi * gamma);
  } else {
    b.upper = (2.0 / gamma) * std::exp(-pi / (4.0 * gamma));
    b.alpha = 3.0 * std::exp(-2.0 * pi / gamma);
  }
  b.lower = (1.0 - b.alpha) * b.upper;
  return b;
}

// ---------------------------------------------------------------------------
// Modular self-duality check of the odd theta series
// ---------------------------------------------------------------------------

struct ThetaIdentity {
  double gamma = 0;
  double lhs = 0;  // gamma^{3/2} sum_n (-1)^n (n+1/2) exp(-pi gamma (n+1/2)^2)
  double rhs = 0;  //             sum_k (-1)^k (k+1/2) exp(-(pi/gamma)(k+1/2)^2)
  double residual = 0;
  long long terms_lhs = 0;
  long long terms_rhs = 0;
};

// Both sides evaluated independently in 50-digit arithmetic: near the ends of
// the useful gamma range one side is ~1e-7 obtained by cancelling order-1
// terms, so double precision would report accumulation noise instead of the
// identity.  The residual is therefore a genuine measure of the identity.
inline ThetaIdentity theta_identity_check(double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("theta_identity_check: gamma must be > 0");
  using F = boost::multiprecision::cpp_bin_float_50;
  const F pi = boost::math::constants::pi<F>();
  const F g = gamma;
  const auto side = [](const F& rate, long long* terms) {
    F sum = 0, peak = 0;
    const F cutoff = F("1e-60");
    long long n = 0;
    for (;; ++n) {
      const F h = F(2 * n + 1) / 2;
      const F term = h * exp(-rate * h * h);
      if (term > peak) peak = term;
      if (n > 0 && term < peak * cutoff) break;
      if (n & 1)
        sum -= term;
      else
        sum += term;
      if (n > 100000)
        throw std::runtime_error("theta_identity_check: series failed to settle");
    }
    *terms = n;
    return sum;
  };
  ThetaIdentity r;
  r.gamma = gamma;
  const F lhs = pow(g, F(3) / 2) * side(pi * g, &r.terms_lhs);
  const F rhs = side(pi / g, &r.terms_rhs);
  r.lhs = static_cast<double>(lhs);
  r.rhs = static_cast<double>(rhs);
  r.residual = static_cast<double>(abs(lhs - rhs));
  return r;
}

// ---------------------------------------------------------------------------
// Finite-size convergence against the exact law
// ---------------------------------------------------------------------------

struct ConvergenceReport {
  long long a = 0;
  long long n = 0;      // step count realizing gamma at this level, parity-matched
  double gamma = 0;
  double finite = 0;    // a * P{A_n = a}, exact trigonometric law
  double limit = 0;     // limiting density at gamma
  double gap = 0;       // |finite - limit|, O(1/a)
};

inline ConvergenceReport finite_size_convergence(long long a, double gamma) {
  if (a < 2)
    throw std::invalid_argument("finite_size_convergence: a must be >= 2");
  if (!(gamma > 0.0))
    throw std::invalid_argument("finite_size_convergence: gamma must be > 0");
  long long n = std::llround(2.0 * static_cast<double>(a) * static_cast<double>(a) /
                             (std::numbers::pi * gamma));
  if (((n ^ a) & 1) != 0) ++n;  // round upward to n == a (mod 2)
  if (n < a)
    throw std::domain_error("finite_size_convergence: gamma too large for level a");
  ConvergenceReport r;
  r.a = a;
  r.n = n;
  r.gamma = gamma;
  r.finite = static_cast<double>(a) * max_pmf(n, a);
  r.limit = limiting_density(gamma).density;
  r.gap = std::fabs(r.finite - r.limit);
  return r;
}

}  // namespace walkmax
