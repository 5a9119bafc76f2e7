#pragma once

// Exact non-negative dyadic rationals num / 2^k with an arbitrary-precision
// numerator.  Every probability that a +-1 walk can produce is of this form,
// so distribution tables built on this type are exact: normalization checks
// compare equal to 1, not close to 1.
//
// Canonical form: the numerator is odd, or the value is zero with k == 0, or
// k == 0 with an arbitrary integer numerator.  Canonicalization happens in the
// constructor, so structural equality (same numerator, same exponent) is value
// equality.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace walkmax {

using BigInt = boost::multiprecision::cpp_int;

class Dyadic {
 public:
  Dyadic() = default;  // zero

  Dyadic(BigInt numerator, int log2_den) : num_(std::move(numerator)), k_(log2_den) {
    if (num_ < 0) throw std::invalid_argument("Dyadic: negative numerator");
    if (k_ < 0) throw std::invalid_argument("Dyadic: negative exponent");
    canonicalize();
  }

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1, 0); }
  static Dyadic from_integer(const BigInt& v) { return Dyadic(v, 0); }

  const BigInt& numerator() const noexcept { return num_; }
  int log2_denominator() const noexcept { return k_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  // Exact halving: canonical numerators are odd, so this only bumps the
  // exponent (and zero stays zero).
  Dyadic half() const {
    if (is_zero()) return Dyadic();
    Dyadic r(*this);
    r.k_ += 1;
    return r;
  }

  Dyadic& operator+=(const Dyadic& o) {
    const int k = std::max(k_, o.k_);
    num_ = (num_ << (k - k_)) + (o.num_ << (k - o.k_));
    k_ = k;
    canonicalize();
    return *this;
  }
  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }

  // Checked subtraction: dyadic non-negatives are closed under subtraction
  // only when the result stays non-negative (the callers are variance and
  // monotonicity computations, where that is a theorem).
  Dyadic operator-(const Dyadic& o) const {
    const int k = std::max(k_, o.k_);
    BigInt n = (num_ << (k - k_)) - (o.num_ << (k - o.k_));
    if (n < 0) throw std::domain_error("Dyadic: subtraction would go negative");
    return Dyadic(std::move(n), k);
  }

  Dyadic operator*(const Dyadic& o) const {
    return Dyadic(num_ * o.num_, k_ + o.k_);
  }
  Dyadic operator*(std::uint64_t m) const { return Dyadic(num_ * m, k_); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;

  std::strong_ordering operator<=>(const Dyadic& o) const {
    const int k = std::max(k_, o.k_);
    const BigInt a = num_ << (k - k_);
    const BigInt b = o.num_ << (k - o.k_);
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  bool exceeds_one() const { return num_ > (BigInt(1) << k_); }

  // Nearest-double rendition.  The top 64 bits of the numerator are exact in
  // an 80-bit long double, so the only rounding is the final narrowing (plus
  // the truncation of bits below the top 64, bounded by 2^-63 relative).
  double to_double() const {
    namespace mp = boost::multiprecision;
    if (is_zero()) return 0.0;
    const long bits = static_cast<long>(mp::msb(num_));
    const long drop = bits > 63 ? bits - 63 : 0;
    const auto top = static_cast<std::uint64_t>(num_ >> drop);
    const long e = drop - k_;
    if (e < -16000) return 0.0;  // below long double range
    return static_cast<double>(std::ldexp(static_cast<long double>(top), static_cast<int>(e)));
  }

  std::string numerator_string() const { return num_.str(); }

  std::string fraction_string() const {
    if (k_ == 0) return num_.str();
    return num_.str() + "/2^" + std::to_string(k_);
  }

 private:
  void canonicalize() {
    namespace mp = boost::multiprecision;
    if (num_.is_zero()) {
      k_ = 0;
      return;
    }
    if (k_ == 0) return;
    const int tz = static_cast<int>(mp::lsb(num_));
    const int s = std::min(tz, k_);
    if (s > 0) {
      num_ >>= s;
      k_ -= s;
    }
  }

  BigInt num_{};
  int k_ = 0;
};

}  // namespace walkmax
