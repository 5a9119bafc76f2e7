#pragma once

// Closed forms for the reflected next-neighbor walk.
//
// Position law (exact, binomial):
//   P_{2n}(0)     = C(2n, n) / 2^{2n}
//   P_{2n}(2x)    = 2 C(2n, n-x) / 2^{2n}        x >= 1
//   P_{2n+1}(2x+1)=   C(2n+1, n-x) / 2^{2n}      x >= 0
//
// Generating functions in lambda, with theta the root of
// theta^2 - (2/lambda) theta + 1 = 0 inside the unit disk:
//   theta = (1 - sqrt(1 - lambda^2)) / lambda = lambda / (1 + sqrt(1 - lambda^2)),
//   theta + 1/theta = 2/lambda, and with theta = e^{-t}:
//   2/(theta^b + theta^{-b}) = 1/cosh(bt), (1 - lambda)/lambda = cosh t - 1.
//
//   sum_n lambda^n P_n(a,a)          = (4/lambda) / (theta^{a+1} + theta^{-(a+1)})
//   sum_n lambda^n P{A_n = a}        = [sech_a - sech_{a+1}] / (1 - lambda)
//   sum_n lambda^n sum_a z^a P{A_n=a}= sum_a z^a (sech_a - sech_{a+1}) / (1 - lambda)
//   sum_n lambda^n E C(A_n, k)       = sum_a C(a, k-1) sech_a / (1 - lambda)
// where sech_b is shorthand for 2/(theta^b + theta^{-b}).
//
// Coefficient extraction (partial fractions over the roots of
// theta^b + theta^{-b}, i.e. a quarter-shifted cosine lattice):
//   coef of lambda^n in 1/(theta^a + theta^{-a})
//     = (1/2a) sum_{j=0}^{a-1} (-1)^j sin(x_j) cos^{n-1}(x_j),
//       x_j = pi (2j+1) / (2a),
// which vanishes unless a == n (mod 2).  Summing tails of these coefficients
// geometrically gives the exact finite-n law of the maximum, max_pmf below.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "walkmax/dyadic.hpp"

namespace walkmax {

inline BigInt binomial(long long n, long long k) {
  if (k < 0 || k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact at every step: r is C(n-k+i, i)
  }
  return r;
}

// ---------------------------------------------------------------------------
// Position law and its exact moments
// ---------------------------------------------------------------------------

inline Dyadic position_pmf(int n, int x) {
  if (n < 1) throw std::invalid_argument("position_pmf: n must be >= 1");
  if (x < 0 || x > n || (x & 1) != (n & 1)) return Dyadic::zero();
  if (n % 2 == 0) {
    const long long m = n / 2, h = x / 2;
    if (h == 0) return Dyadic(binomial(n, m), n);
    return Dyadic(2 * binomial(n, m - h), n);
  }
  const long long m = (n - 1) / 2, h = (x - 1) / 2;
  return Dyadic(binomial(n, m - h), n - 1);
}

struct PositionMoments {
  int n = 0;
  Dyadic mean;
  Dyadic second_moment;
  Dyadic variance;  // second_moment - mean^2, exact
};

// Summation of the closed-form pmf with a running binomial (each step uses
// C(n,k-1)*(n-k+1) = C(n,k)*k, so every division is exact); overall O(n)
// big-integer operations.
inline PositionMoments position_moments(int n) {
  if (n < 1) throw std::invalid_argument("position_moments: n must be >= 1");
  PositionMoments m;
  m.n = n;
  BigInt sum1 = 0, sum2 = 0;  // numerators of mean and second moment
  int scale;                  // shared log2 denominator
  if (n % 2 == 0) {
    scale = n;
    const long long half = n / 2;
    BigInt c = binomial(n, half);  // x = 0 contributes nothing to the sums
    for (long long h = 1; h <= half; ++h) {
      c *= half - h + 1;
      c /= half + h;
      const BigInt w = 2 * c;  // pmf numerator at x = 2h
      sum1 += w * (2 * h);
      sum2 += w * (4 * h * h);
    }
  } else {
    scale = n - 1;
    const long long mid = (n - 1) / 2;
    BigInt c = binomial(n, mid);
    for (long long h = 0; h <= mid; ++h) {
      if (h > 0) {
        c *= mid - h + 1;
        c /= mid + h + 1;
      }
      const long long x = 2 * h + 1;
      sum1 += c * x;
      sum2 += c * (x * x);
    }
  }
  m.mean = Dyadic(sum1, scale);
  m.second_moment = Dyadic(sum2, scale);
  m.variance = m.second_moment - m.mean * m.mean;
  return m;
}

// ---------------------------------------------------------------------------
// Generating-function evaluations
// ---------------------------------------------------------------------------

struct GfPoint {
  double lambda = 0;
  double theta = 0;      // root in (0,1)
  double theta_inv = 0;  // 1/theta, computed independently of theta
};

inline GfPoint gf_theta(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("gf_theta: lambda must lie in (0,1)");
  const double s = std::sqrt((1.0 - lambda) * (1.0 + lambda));
  // theta = (1 - sqrt(1-lambda^2))/lambda, written to avoid cancellation
  // near lambda = 0.
  return {lambda, lambda / (1.0 + s), (1.0 + s) / lambda};
}

// sech_b = 2/(theta^b + theta^{-b}) = 1/cosh(b t), evaluated from the small
// root only so that huge b underflows to 0 instead of overflowing.
inline double sech_weight(const GfPoint& g, long long b) {
  if (b < 0) b = -b;
  if (b == 0) return 1.0;
  const long double t = -std::log(static_cast<long double>(g.theta));
  const long double p = std::exp(-static_cast<long double>(b) * t);  // theta^b
  return static_cast<double>(2.0L * p / (1.0L + p * p));
}

// sum_n lambda^n P_n(a, a): the walk sits exactly at its running maximum.
inline double gf_hit_own_max(double lambda, int a) {
  if (a < 1) throw std::invalid_argument("gf_hit_own_max: a must be >= 1");
  const GfPoint g = gf_theta(lambda);
  return 2.0 / lambda * sech_weight(g, a + 1);
}

// sum_n lambda^n P{A_n = a}.
inline double gf_max_marginal(double lambda, int a) {
  if (a < 1) throw std::invalid_argument("gf_max_marginal: a must be >= 1");
  const GfPoint g = gf_theta(lambda);
  return (sech_weight(g, a) - sech_weight(g, a + 1)) / (1.0 - lambda);
}

struct TailSum {
  double value = 0;
  double tail_bound = 0;  // rigorous bound on the dropped tail
  long long terms = 0;
};

// Default truncation point: terms decay like theta^a, so theta^a <= eps.
inline long long default_level_cutoff(double theta, double eps = 1e-14) {
  const double t = -std::log(theta);
  long long a = static_cast<long long>(std::ceil(-std::log(eps) / t));
  return a < 8 ? 8 : a;
}

// Double generating function of the maximum,
//   Q(lambda, z) = sum_{n>=1} lambda^n sum_{a>=1} z^a P{A_n = a}
//                = sum_{a>=1} z^a (sech_a - sech_{a+1}) / (1 - lambda).
// Each z-coefficient is the marginal generating function above, so this form
// matches the defining series termwise (in particular Q(lambda, 0) = 0 and
// Q(lambda, 1) = lambda/(1-lambda) by telescoping).
inline TailSum gf_double_q(double lambda, double z, long long a_max = 0) {
  if (!(z >= 0.0 && z <= 1.0))
    throw std::invalid_argument("gf_double_q: z must lie in [0,1]");
  const GfPoint g = gf_theta(lambda);
  if (a_max <= 0) a_max = default_level_cutoff(g.theta);
  long double acc = 0.0L;
  double zp = 1.0;  // z^a
  for (long long a = 1; a <= a_max; ++a) {
    zp *= z;
    if (zp == 0.0) {
      a_max = a;
      break;
    }
    acc += static_cast<long double>(zp) *
           (sech_weight(g, a) - sech_weight(g, a + 1));
  }
  TailSum r;
  r.terms = a_max;
  r.value = static_cast<double>(acc / (1.0L - static_cast<long double>(lambda)));
  // 0 <= sech_a - sech_{a+1} <= sech_a <= 2 theta^a
  const double zt = z * g.theta;
  r.tail_bound = 2.0 * std::pow(zt, static_cast<double>(a_max + 1)) /
                 ((1.0 - zt) * (1.0 - lambda));
  return r;
}

// sum_n lambda^n E{ C(A_n, k) } = sum_a C(a, k-1) sech_a / (1 - lambda).
inline TailSum factorial_moment_gf(double lambda, int k, long long a_max = 0) {
  if (k < 1) throw std::invalid_argument("factorial_moment_gf: k must be >= 1");
  const GfPoint g = gf_theta(lambda);
  long double acc = 0.0L;
  long double binom = k == 1 ? 1.0L : 0.0L;  // C(a, k-1), updated as a grows
  const long double theta = g.theta;
  long long a = 0;
  double tail = 0.0;
  while (true) {
    ++a;
    if (a >= k - 1) {
      if (a == k - 1)
        binom = 1.0L;
      else
        binom = binom * a / (a - (k - 1));  // C(a,k-1) = C(a-1,k-1) * a/(a-k+1)
    }
    const long double term = binom * static_cast<long double>(sech_weight(g, a));
    acc += term;
    if (a_max > 0) {
      if (a >= a_max) {
        const long double rho = theta * (a + 1) / std::max<long double>(1.0L, a + 2 - k);
        tail = rho < 1.0L ? static_cast<double>(term * rho / (1.0L - rho))
                          : std::numeric_limits<double>::infinity();
        break;
      }
    } else if (a >= 2 * k + 8) {
      const long double rho = theta * (a + 1) / (a + 2 - k);
      if (rho < 1.0L && term * rho / (1.0L - rho) < 1e-17L * acc) {
        tail = static_cast<double>(term * rho / (1.0L - rho));
        a_max = a;
        break;
      }
    }
    if (a > (1LL << 26))
      throw std::runtime_error("factorial_moment_gf: series did not settle");
  }
  TailSum r;
  r.terms = a_max;
  r.value = static_cast<double>(acc / (1.0L - static_cast<long double>(lambda)));
  r.tail_bound = tail / (1.0 - lambda);
  return r;
}

// ---------------------------------------------------------------------------
// Trigonometric coefficient extraction and the exact law of the maximum
// ---------------------------------------------------------------------------

namespace detail {

// c^e with e >= 0, via exp(e log|c|); exact 0 for c = 0 (and c^0 = 1, which
// is what the n = 1 midpoint term requires).
inline long double pow_cos(long double c, long long e) {
  if (e == 0) return 1.0L;
  if (c == 0.0L) return 0.0L;
  const long double m = std::exp(static_cast<long double>(e) * std::log(std::fabs(c)));
  return (c < 0.0L && (e & 1)) ? -m : m;
}

struct Kahan {
  long double sum = 0.0L, c = 0.0L;
  void add(long double v) {
    const long double y = v - c;
    const long double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// 2 * sum_{j < floor(b/2)} (-1)^j cos^E(x_j)/sin(x_j), x_j = pi(2j+1)/(2b).
// This is the full alternating sum over j = 0..b-1 for the parity cases that
// arise below (the j -> b-1-j reflection maps each term onto itself; an odd
// b's midpoint lands on cos = 0 and contributes nothing for E >= 1).  On the
// half range cos is positive and the terms decrease strictly in magnitude, so
// the loop may stop once they vanish relative to the running sum.
inline long double folded_cos_power_sum(long long b, long long E) {
  const long double pi = std::numbers::pi_v<long double>;
  Kahan acc;
  long double scale = 0.0L;
  for (long long j = 0; j < b / 2; ++j) {
    const long double x = pi * static_cast<long double>(2 * j + 1) / (2.0L * b);
    const long double term = pow_cos(std::cos(x), E) / std::sin(x);
    acc.add(j & 1 ? -term : term);
    if (term > scale) scale = term;
    if (term < 1e-26L * scale) break;
  }
  return 2.0L * acc.sum;
}

}  // namespace detail

struct TrigCoef {
  long long n = 0;
  long long a = 0;
  double value = 0;
};

// coef of lambda^n in 1/(theta^a + theta^{-a}); zero unless a == n (mod 2).
inline TrigCoef sech_coef(long long n, long long a) {
  if (n < 1 || a < 1) throw std::invalid_argument("sech_coef: need n >= 1, a >= 1");
  TrigCoef r{n, a, 0.0};
  if (((n - a) & 1) != 0) return r;
  const long double pi = std::numbers::pi_v<long double>;
  detail::Kahan acc;
  for (long long j = 0; j < a; ++j) {
    const long double x = pi * static_cast<long double>(2 * j + 1) / (2.0L * a);
    const long double term = std::sin(x) * detail::pow_cos(std::cos(x), n - 1);
    acc.add(j & 1 ? -term : term);
  }
  r.value = static_cast<double>(acc.sum / (2.0L * a));
  return r;
}

// Exact finite-n law of the maximum, Q_N(a) = P{A_N = a}, as geometric tail
// sums of sech_coef over n > N (two parity groups, levels a and a+1):
//
//   N == a (mod 2):   Q_N(a) = S_{a+1}(N)/(a+1)   - S_a(N+1)/a
//   N == a+1 (mod 2): Q_N(a) = S_{a+1}(N+1)/(a+1) - S_a(N)/a
//
// with S_b(E) = sum_{j=0}^{b-1} (-1)^j cos^E(x_j)/sin(x_j) reduced to its
// half range above.  Vanishes (up to rounding) for a > N.
inline double max_pmf(long long N, long long a) {
  if (N < 1 || a < 1) throw std::invalid_argument("max_pmf: need N >= 1, a >= 1");
  long double q;
  if (((N - a) & 1) == 0)
    q = detail::folded_cos_power_sum(a + 1, N) / (a + 1) -
        detail::folded_cos_power_sum(a, N + 1) / a;
  else
    q = detail::folded_cos_power_sum(a + 1, N + 1) / (a + 1) -
        detail::folded_cos_power_sum(a, N) / a;
  return static_cast<double>(q);
}

// Q_n(a) - Q_{n-1}(a) = 2 (-1)^{n+a} * coef of lambda^n in
// 1/(theta^b + theta^{-b}), with b = a when n == a (mod 2), else b = a+1.
// (Only one parity group contributes for each n; the n = 1, a = 1 atom is
// carried by the midpoint term cos^0 = 1 of sech_coef, so no delta correction
// is needed.)
inline double max_pmf_delta(long long n, long long a) {
  if (n < 1 || a < 1) throw std::invalid_argument("max_pmf_delta: need n >= 1, a >= 1");
  const long long b = ((n - a) & 1) == 0 ? a : a + 1;
  const double c = sech_coef(n, b).value;
  return ((n + a) & 1 ? -2.0 : 2.0) * c;
}

// P{walk first reaches level a at step n} = P{A_{n-1} <= a-1} - P{A_n <= a-1},
// computed from max_pmf (the empty maximum at n = 0 counts as <= any level).
// Equivalently: coef of lambda^n in 2/(theta^a + theta^{-a}).
inline double first_passage_pmf(long long n, long long a) {
  if (n < 1 || a < 1)
    throw std::invalid_argument("first_passage_pmf: need n >= 1, a >= 1");
  const auto cdf = [](long long m, long long level) -> long double {
    if (m == 0) return 1.0L;
    detail::Kahan acc;
    for (long long b = 1; b <= level; ++b) acc.add(max_pmf(m, b));
    return acc.sum;
  };
  return static_cast<double>(cdf(n - 1, a - 1) - cdf(n, a - 1));
}

// Moments of A_N from the trigonometric law; the support is cut where the
// scaled level a/sqrt(N) is far into the Gaussian-type tail.
struct MaxLawMoments {
  long long n = 0;
  double total = 0;  // sum of the evaluated pmf (1 up to rounding/truncation)
  double mean = 0;
  double second_moment = 0;
  double variance = 0;
  long long a_cut = 0;
};

inline MaxLawMoments max_law_moments(long long N, long long a_cut = 0) {
  if (N < 1) throw std::invalid_argument("max_law_moments: N must be >= 1");
  if (a_cut <= 0) {
    a_cut = static_cast<long long>(10.0 * std::ceil(std::sqrt(static_cast<double>(N)))) + 64;
    if (a_cut > N) a_cut = N;
  }
  detail::Kahan tot, m1, m2;
  for (long long a = 1; a <= a_cut; ++a) {
    const long double q = max_pmf(N, a);
    tot.add(q);
    m1.add(a * q);
    m2.add(static_cast<long double>(a) * a * q);
  }
  MaxLawMoments r;
  r.n = N;
  r.a_cut = a_cut;
  r.total = static_cast<double>(tot.sum);
  r.mean = static_cast<double>(m1.sum);
  r.second_moment = static_cast<double>(m2.sum);
  r.variance = static_cast<double>(m2.sum - m1.sum * m1.sum);
  return r;
}

}  // namespace walkmax
