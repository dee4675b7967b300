#include "hkdb/rational.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace hkdb {

namespace {

void check_unit_interval(const Rational& v) {
  if (v < 0 || v > 1) throw std::invalid_argument("ExactProb: value outside [0, 1]");
}

}  // namespace

ExactProb::ExactProb(const BigInt& num, const BigInt& den) {
  if (den <= 0) throw std::invalid_argument("ExactProb: denominator must be positive");
  value_ = Rational(num, den);
  check_unit_interval(value_);
}

ExactProb::ExactProb(const Rational& value) : value_(value) { check_unit_interval(value_); }

ExactProb ExactProb::pow2_neg(unsigned k) {
  BigInt den = 1;
  den <<= k;
  return ExactProb(BigInt(1), den);
}

ExactProb ExactProb::power(const Rational& base, unsigned k) {
  Rational r(1);
  for (unsigned i = 0; i < k; ++i) r *= base;
  return ExactProb(r);
}

std::string ExactProb::to_string() const {
  if (den() == 1) return num().str();
  return num().str() + "/" + den().str();
}

std::string ExactProb::to_decimal(int digits) const { return hkdb::to_decimal(value_, digits); }

std::string to_decimal(const Rational& r, int digits) {
  // Rounded to `digits` places after the point using exact integer arithmetic.
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = (num * scale * 2 + den) / (den * 2);
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::string frac_str = frac.str();
  if (static_cast<int>(frac_str.size()) < digits) {
    frac_str.insert(0, static_cast<std::size_t>(digits) - frac_str.size(), '0');
  }
  std::string out = (negative && scaled != 0 ? "-" : "") + whole.str();
  if (digits > 0) out += "." + frac_str;
  return out;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty input");
  if (auto caret = text.rfind('^'); caret != std::string::npos) {
    std::string base = text.substr(0, caret);
    if (base.size() >= 2 && base.front() == '(' && base.back() == ')') base = base.substr(1, base.size() - 2);
    unsigned long k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(text.substr(caret + 1), &used);
      if (used != text.size() - caret - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_rational: bad exponent in '" + text + "'");
    }
    Rational b = parse_rational(base);
    Rational out = 1;
    for (unsigned long i = 0; i < k; ++i) out *= b;
    return out;
  }
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt n(text.substr(0, slash));
      BigInt d(text.substr(slash + 1));
      if (d == 0) throw std::invalid_argument("parse_rational: zero denominator");
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (negative) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    BigInt den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    BigInt num = BigInt(whole) * den + (frac.empty() ? BigInt(0) : BigInt(frac));
    if (negative) num = -num;
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("parse_rational: cannot parse '" + text + "'");
  }
}

}  // namespace hkdb
