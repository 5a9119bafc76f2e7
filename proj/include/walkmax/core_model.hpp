#pragma once

// Dynamic program for the joint law of (position, running maximum) of the
// symmetric next-neighbor walk on {0, 1, 2, ...} reflected at the origin:
// from 0 the walker moves to 1 with probability 1, from x > 0 it moves to
// x +- 1 with probability 1/2 each.  The first step is therefore forced,
// P_1(x, a) = [x = 1][a = 1].
//
// One unified recursion covers interior, boundary, and new-maximum cases:
//
//   P_{n+1}(x,a) = 1/2 (1 + [x=1] - [x=a+1]) P_n(x-1, a)
//                + 1/2 P_n(x+1, a)
//                + 1/2 [x=a] (1 - [a=1]) P_n(a-1, a-1)
//
// The (1 + [x=1]) coefficient encodes the forced step off the origin; the
// -[x=a+1] term cancels the illegal crossing of the running maximum (it never
// fires on the stored wedge x <= a); the last term injects mass arriving at a
// fresh maximum.  step_joint implements exactly this gather; the piecewise
// boundary rules exist only in the test suite, as a cross-check.
//
// All arithmetic is exact (Dyadic), so invariants hold with equality.  A
// double-precision lane (DenseJoint) provides the same evolution for sizes
// where exact arithmetic is wasteful.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "walkmax/distributions.hpp"
#include "walkmax/dyadic.hpp"

namespace walkmax {

// State after the forced first step: walker at 1, running maximum 1.
inline JointTable initial_joint() {
  JointTable t;
  t.n = 1;
  t.entries[{1, 1}] = Dyadic::one();
  return t;
}

// One application of the unified recursion above.
inline JointTable step_joint(const JointTable& t) {
  JointTable next;
  next.n = t.n + 1;
  for (int a = 1; a <= next.n; ++a) {
    for (int x = next.n & 1 ? 1 : 0; x <= a; x += 2) {
      Dyadic v;
      if (x >= 1) {
        const Dyadic up = t.at(x - 1, a);
        if (!up.is_zero()) v += x == 1 ? up : up.half();  // 1/2 (1 + [x=1])
      }
      const Dyadic down = t.at(x + 1, a);
      if (!down.is_zero()) v += down.half();
      if (x == a && a >= 2) {
        const Dyadic fresh = t.at(a - 1, a - 1);
        if (!fresh.is_zero()) v += fresh.half();
      }
      if (!v.is_zero()) next.entries[{x, a}] = v;
    }
  }
  return next;
}

// Joint law after n steps.  n = 0 is rejected: before the first step the
// walker sits at the origin and the running maximum is degenerate.
inline JointTable joint_distribution(int n) {
  if (n < 1) throw std::invalid_argument("joint_distribution: n must be >= 1");
  JointTable t = initial_joint();
  for (int m = 1; m < n; ++m) t = step_joint(t);
  return t;
}

inline PosDist marginal_position(const JointTable& t) {
  PosDist d;
  d.n = t.n;
  for (const auto& [key, p] : t.entries) d.pmf[key.first] += p;
  return d;
}

inline MaxDist marginal_max(const JointTable& t) {
  MaxDist d;
  d.n = t.n;
  for (const auto& [key, p] : t.entries) d.pmf[key.second] += p;
  return d;
}

inline constexpr int kEnumerationCap = 24;

// Independent oracle: enumerate every path of the walk, branching only where
// the walk actually has a choice (steps taken at the origin are forced and
// carry probability 1).  A path with f free steps has probability 2^-f with
// f <= n-1, so integer weights at the common scale 2^(n-1) are exact and fit
// a 64-bit accumulator for n <= kEnumerationCap.
inline JointTable enumerate_paths(int n) {
  if (n < 1 || n > kEnumerationCap)
    throw std::invalid_argument("enumerate_paths: need 1 <= n <= 24");
  const int scale = n - 1;
  std::vector<std::vector<std::uint64_t>> weight(n + 1,
                                                 std::vector<std::uint64_t>(n + 1, 0));
  struct Frame {
    int step, s, a, free;
  };
  std::vector<Frame> stack;
  stack.push_back({1, 1, 1, 0});  // after the forced first step
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.step == n) {
      weight[f.s][f.a] += std::uint64_t{1} << (scale - f.free);
      continue;
    }
    if (f.s == 0) {
      stack.push_back({f.step + 1, 1, f.a, f.free});
    } else {
      stack.push_back({f.step + 1, f.s - 1, f.a, f.free + 1});
      stack.push_back({f.step + 1, f.s + 1, f.s + 1 > f.a ? f.s + 1 : f.a, f.free + 1});
    }
  }
  JointTable t;
  t.n = n;
  for (int a = 1; a <= n; ++a)
    for (int x = 0; x <= a; ++x)
      if (weight[x][a]) t.entries[{x, a}] = Dyadic(weight[x][a], scale);
  return t;
}

// Double-precision lane: same recursion on a dense lower-triangular array.
// For step counts where exact numerators get long this trades exactness
// (roundoff ~ n * 2^-53) for a flat memory profile and O(n^3) float work.
class DenseJoint {
 public:
  static DenseJoint evolve(int n) {
    if (n < 1) throw std::invalid_argument("DenseJoint: n must be >= 1");
    DenseJoint cur(n), nxt(n);
    cur.tri_[idx(1, 1)] = 1.0;
    for (int m = 1; m < n; ++m) {
      for (int a = 1; a <= m + 1; ++a) {
        for (int x = (m + 1) & 1 ? 1 : 0; x <= a; x += 2) {
          double v = 0.0;
          if (x >= 1) v += (x == 1 ? 1.0 : 0.5) * cur.tri_[idx(x - 1, a)];
          if (x + 1 <= a) v += 0.5 * cur.tri_[idx(x + 1, a)];
          if (x == a && a >= 2) v += 0.5 * cur.tri_[idx(a - 1, a - 1)];
          nxt.tri_[idx(x, a)] = v;
        }
      }
      std::swap(cur.tri_, nxt.tri_);
      // nxt now holds the stale table from two steps ago; reset it before it
      // becomes the next write target
      std::fill(nxt.tri_.begin(), nxt.tri_.end(), 0.0);
    }
    return cur;
  }

  int n() const { return n_; }

  double at(int x, int a) const {
    if (x < 0 || a < 0 || x > a || a > n_) return 0.0;
    return tri_[idx(x, a)];
  }

  // index a: P{A_n = a}; index 0 unused.
  std::vector<double> max_marginal() const {
    std::vector<double> q(n_ + 1, 0.0);
    for (int a = 1; a <= n_; ++a)
      for (int x = n_ & 1 ? 1 : 0; x <= a; x += 2) q[a] += tri_[idx(x, a)];
    return q;
  }

  std::vector<double> position_marginal() const {
    std::vector<double> p(n_ + 1, 0.0);
    for (int a = 1; a <= n_; ++a)
      for (int x = n_ & 1 ? 1 : 0; x <= a; x += 2) p[x] += tri_[idx(x, a)];
    return p;
  }

 private:
  explicit DenseJoint(int n)
      : n_(n), tri_(static_cast<std::size_t>(n + 1) * (n + 2) / 2, 0.0) {}
  static std::size_t idx(int x, int a) {
    return static_cast<std::size_t>(a) * (a + 1) / 2 + x;
  }
  int n_;
  std::vector<double> tri_;
};

}  // namespace walkmax
