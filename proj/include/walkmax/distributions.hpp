#pragma once

// Exact distribution tables for the reflected +-1 walk after n steps.
//
// JointTable holds P{S_n = x, A_n = a} (position, running maximum) on the
// wedge 0 <= x <= a <= n with the parity constraint x == n (mod 2); zero
// entries are omitted, so two tables are value-equal iff they are
// structurally equal.  PosDist and MaxDist are its marginals.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "walkmax/dyadic.hpp"

namespace walkmax {

struct JointTable {
  int n = 0;  // number of steps taken (n >= 1)
  std::map<std::pair<int, int>, Dyadic> entries;  // (x, a) -> probability

  Dyadic at(int x, int a) const {
    auto it = entries.find({x, a});
    return it == entries.end() ? Dyadic::zero() : it->second;
  }

  Dyadic total() const {
    Dyadic t;
    for (const auto& [key, p] : entries) t += p;
    return t;
  }

  friend bool operator==(const JointTable&, const JointTable&) = default;

  // Full invariant check; throws std::logic_error naming the violation.
  void validate() const {
    if (n < 1) throw std::logic_error("JointTable: n must be >= 1");
    for (const auto& [key, p] : entries) {
      const auto [x, a] = key;
      if (p.is_zero()) throw std::logic_error("JointTable: stored zero entry");
      if (p.exceeds_one()) throw std::logic_error("JointTable: entry > 1");
      if (x < 0 || a < 1 || x > a || a > n)
        throw std::logic_error("JointTable: support outside wedge 0<=x<=a<=n at (" +
                               std::to_string(x) + "," + std::to_string(a) + ")");
      if ((x & 1) != (n & 1))
        throw std::logic_error("JointTable: position parity must match step parity");
    }
    if (!(total() == Dyadic::one()))
      throw std::logic_error("JointTable: entries must sum to exactly 1");
  }
};

struct PosDist {
  int n = 0;
  std::map<int, Dyadic> pmf;  // x -> P{S_n = x}

  Dyadic at(int x) const {
    auto it = pmf.find(x);
    return it == pmf.end() ? Dyadic::zero() : it->second;
  }
  Dyadic total() const {
    Dyadic t;
    for (const auto& [x, p] : pmf) t += p;
    return t;
  }
  friend bool operator==(const PosDist&, const PosDist&) = default;
};

struct MaxDist {
  int n = 0;
  std::map<int, Dyadic> pmf;  // a -> P{A_n = a}

  Dyadic at(int a) const {
    auto it = pmf.find(a);
    return it == pmf.end() ? Dyadic::zero() : it->second;
  }
  Dyadic total() const {
    Dyadic t;
    for (const auto& [a, p] : pmf) t += p;
    return t;
  }
  // P{A_n <= a}, exact.
  Dyadic cdf(int a) const {
    Dyadic t;
    for (const auto& [b, p] : pmf) {
      if (b > a) break;
      t += p;
    }
    return t;
  }
  friend bool operator==(const MaxDist&, const MaxDist&) = default;
};

}  // namespace walkmax
