#pragma once

// Seeded Monte Carlo simulation of the reflected walk.
//
// Contract: the results are a pure function of (n, trials, seed) and are
// bit-identical for any worker count.  Three ingredients make that hold:
//   * every trial index owns its own keyed RNG substream, so the partition
//     of trials across workers is irrelevant;
//   * per-worker accumulators are exact integers (sums, sums of squares,
//     histogram counts), so merging is associative and commutative;
//   * all floating-point statistics are derived once from the merged
//     integer state.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "walkmax/closed_form.hpp"

namespace walkmax {

// SplitMix64: 64 bits of output per step from a Weyl sequence pushed through
// an avalanching finalizer.  Small, fast, and passes BigCrush; one instance
// per trial is cheap enough to construct in the inner loop.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// Stateless avalanche of one 64-bit word (the SplitMix64 finalizer).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Keyed substream for one trial.  The start state is an avalanche of
// (seed, trial), not seed + trial * increment: adjacent additive states
// would make trial t+1 replay trial t's sequence shifted by one draw.
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  const std::uint64_t key =
      mix64(seed ^ 0x9E3779B97F4A7C15ULL) ^ mix64(trial + 0x94D049BB133111EBULL);
  return SplitMix64(key);
}

struct WalkSample {
  long long s = 0;  // final position
  long long a = 0;  // running maximum over steps 1..n
};

// One exact sample of (S_n, A_n).  The first step is forced to 1; afterwards
// a walker at 0 steps to 1 without consuming randomness, and a walker
// elsewhere consumes one bit (batches of 64 per RNG draw).
inline WalkSample simulate_walk(long long n, SplitMix64& rng) {
  if (n < 1) throw std::invalid_argument("simulate_walk: n must be >= 1");
  long long s = 1, a = 1;
  std::uint64_t bits = 0;
  int avail = 0;
  for (long long i = 1; i < n; ++i) {
    if (s == 0) {
      s = 1;
      continue;
    }
    if (avail == 0) {
      bits = rng.next();
      avail = 64;
    }
    s += (bits & 1u) ? 1 : -1;
    bits >>= 1;
    --avail;
    if (s > a) a = s;
  }
  return {s, a};
}

struct SimConfig {
  long long n = 1;
  long long trials = 1;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct SimSummary {
  long long n = 0;
  long long trials = 0;
  std::uint64_t seed = 0;

  // exact accumulated state (order-independent)
  std::uint64_t sum_s = 0;
  std::uint64_t sum_a = 0;
  unsigned __int128 sum_s2 = 0;
  unsigned __int128 sum_a2 = 0;
  std::map<long long, std::uint64_t> hist_a;  // a -> count, sums to trials

  // derived statistics (functions of the exact state above)
  double mean_s = 0, var_s = 0;
  double mean_a = 0, var_a = 0;
  bool ci_reported = false;  // normal-approximation CIs need enough trials
  double ci_halfwidth_mean_s = 0;  // 99% level
  double ci_halfwidth_mean_a = 0;

  bool operator==(const SimSummary&) const = default;
};

namespace detail {

struct SimAccum {
  std::uint64_t sum_s = 0, sum_a = 0;
  unsigned __int128 sum_s2 = 0, sum_a2 = 0;
  std::map<long long, std::uint64_t> hist_a;

  void add(const WalkSample& w) {
    sum_s += static_cast<std::uint64_t>(w.s);
    sum_a += static_cast<std::uint64_t>(w.a);
    sum_s2 += static_cast<unsigned __int128>(w.s) * static_cast<unsigned __int128>(w.s);
    sum_a2 += static_cast<unsigned __int128>(w.a) * static_cast<unsigned __int128>(w.a);
    ++hist_a[w.a];
  }

  void merge(const SimAccum& o) {
    sum_s += o.sum_s;
    sum_a += o.sum_a;
    sum_s2 += o.sum_s2;
    sum_a2 += o.sum_a2;
    for (const auto& [a, c] : o.hist_a) hist_a[a] += c;
  }
};

}  // namespace detail

inline constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal point

inline SimSummary run_simulation(const SimConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("run_simulation: n must be >= 1");
  if (cfg.trials < 1)
    throw std::invalid_argument("run_simulation: trials must be >= 1");
  if (cfg.workers < 1)
    throw std::invalid_argument("run_simulation: workers must be >= 1");
  // |S|, A <= n pathwise, so sum_s/sum_a fit in 64 bits iff n*trials does;
  // the 128-bit squares then cannot overflow either (n^2 * trials < 2^127).
  const unsigned __int128 worst =
      static_cast<unsigned __int128>(cfg.n) * static_cast<unsigned __int128>(cfg.trials);
  if (worst >> 64)
    throw std::invalid_argument("run_simulation: n*trials exceeds exact accumulation range");

  const int workers =
      static_cast<int>(std::min<long long>(cfg.workers, cfg.trials));
  std::vector<detail::SimAccum> parts(workers);
  const long long per = cfg.trials / workers;
  const long long extra = cfg.trials % workers;
  const auto block = [&](int w) -> std::pair<long long, long long> {
    const long long lo = w * per + std::min<long long>(w, extra);
    const long long hi = lo + per + (w < extra ? 1 : 0);
    return {lo, hi};
  };
  const auto work = [&](int w) {
    detail::SimAccum& acc = parts[w];
    const auto [lo, hi] = block(w);
    for (long long t = lo; t < hi; ++t) {
      SplitMix64 rng = trial_stream(cfg.seed, static_cast<std::uint64_t>(t));
      acc.add(simulate_walk(cfg.n, rng));
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  detail::SimAccum total;
  for (const auto& p : parts) total.merge(p);

  SimSummary out;
  out.n = cfg.n;
  out.trials = cfg.trials;
  out.seed = cfg.seed;
  out.sum_s = total.sum_s;
  out.sum_a = total.sum_a;
  out.sum_s2 = total.sum_s2;
  out.sum_a2 = total.sum_a2;
  out.hist_a = std::move(total.hist_a);

  const double t = static_cast<double>(cfg.trials);
  out.mean_s = static_cast<double>(out.sum_s) / t;
  out.mean_a = static_cast<double>(out.sum_a) / t;
  out.var_s = static_cast<double>(static_cast<long double>(out.sum_s2) / t) -
              out.mean_s * out.mean_s;
  out.var_a = static_cast<double>(static_cast<long double>(out.sum_a2) / t) -
              out.mean_a * out.mean_a;
  out.ci_reported = cfg.trials >= 10000;
  if (out.ci_reported) {
    out.ci_halfwidth_mean_s = kZ99 * std::sqrt(std::max(out.var_s, 0.0) / t);
    out.ci_halfwidth_mean_a = kZ99 * std::sqrt(std::max(out.var_a, 0.0) / t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Goodness of fit of the sampled maximum against the exact law
// ---------------------------------------------------------------------------

struct ChiSquared {
  double statistic = 0;
  long long dof = 0;
  double p_value = 1;
  long long bins = 0;  // after pooling
};

// Pearson chi-squared of hist_a against P{A_n = a}, pooling consecutive
// levels (and the far tail) so every bin has expected count >= min_expected.
inline ChiSquared chi_squared_against_max_law(const SimSummary& sim,
                                              double min_expected = 5.0) {
  if (sim.trials < 1 || sim.n < 1)
    throw std::invalid_argument("chi_squared_against_max_law: empty summary");
  const double t = static_cast<double>(sim.trials);
  // scan levels up to the larger of the highest observed level and the point
  // where the expected mass beyond is negligible
  const long long a_obs = sim.hist_a.empty() ? 1 : sim.hist_a.rbegin()->first;
  std::vector<double> expected;  // expected[a-1] for level a
  double cum = 0.0;
  long long a_hi = 0;
  while (a_hi < sim.n) {
    ++a_hi;
    const double e = t * std::max(max_pmf(sim.n, a_hi), 0.0);
    expected.push_back(e);
    cum += e;
    if (a_hi >= a_obs && t - cum < 1e-9) break;
  }
  // pool left to right
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double pobs = 0.0, pexp = 0.0;
  for (long long a = 1; a <= a_hi; ++a) {
    const auto it = sim.hist_a.find(a);
    pobs += it == sim.hist_a.end() ? 0.0 : static_cast<double>(it->second);
    pexp += expected[static_cast<std::size_t>(a - 1)];
    if (pexp >= min_expected) {
      bins.emplace_back(pobs, pexp);
      pobs = pexp = 0.0;
    }
  }
  // the tail past a_hi holds no observations (a_hi >= highest observed level)
  pexp += std::max(t - cum, 0.0);
  if (pexp >= min_expected || bins.empty()) {
    if (pexp > 0.0) bins.emplace_back(pobs, pexp);
  } else {
    bins.back().first += pobs;
    bins.back().second += pexp;
  }
  ChiSquared r;
  r.bins = static_cast<long long>(bins.size());
  for (const auto& [obs, exp] : bins)
    r.statistic += (obs - exp) * (obs - exp) / exp;
  r.dof = r.bins - 1;
  if (r.dof >= 1)
    r.p_value =
        boost::math::gamma_q(0.5 * static_cast<double>(r.dof), 0.5 * r.statistic);
  else
    r.p_value = r.statistic < 1e-9 ? 1.0 : 0.0;
  return r;
}

}  // namespace walkmax
