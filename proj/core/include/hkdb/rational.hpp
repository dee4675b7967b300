#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace hkdb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A probability in [0, 1] held as an exact rational in lowest terms.
class ExactProb {
 public:
  ExactProb() = default;
  ExactProb(const BigInt& num, const BigInt& den);
  explicit ExactProb(const Rational& value);

  static ExactProb zero() { return ExactProb(); }
  static ExactProb one() { return ExactProb(Rational(1)); }
  /// 2^{-k}
  static ExactProb pow2_neg(unsigned k);
  /// (num/den)^k
  static ExactProb power(const Rational& base, unsigned k);

  const Rational& value() const noexcept { return value_; }
  BigInt num() const { return boost::multiprecision::numerator(value_); }
  BigInt den() const { return boost::multiprecision::denominator(value_); }

  double to_double() const { return value_.convert_to<double>(); }

  /// "num/den", or "0" / "1".
  std::string to_string() const;
  /// Fixed-point rendering with `digits` significant decimals.
  std::string to_decimal(int digits = 12) const;

  friend ExactProb operator*(const ExactProb& a, const ExactProb& b) {
    return ExactProb(a.value_ * b.value_);
  }
  friend bool operator==(const ExactProb& a, const ExactProb& b) { return a.value_ == b.value_; }
  friend bool operator<(const ExactProb& a, const ExactProb& b) { return a.value_ < b.value_; }
  friend bool operator<=(const ExactProb& a, const ExactProb& b) { return a.value_ <= b.value_; }
  friend bool operator>(const ExactProb& a, const ExactProb& b) { return a.value_ > b.value_; }

 private:
  Rational value_{0};
};

/// Decimal rendering of an arbitrary (possibly negative) rational.
std::string to_decimal(const Rational& r, int digits = 12);

/// Parses "n", "n/d", a decimal literal such as "0.25", or a power "(3/4)^16" exactly.
Rational parse_rational(const std::string& text);

}  // namespace hkdb
