#include "hkdb/bits.hpp"
#include "hkdb/rational.hpp"

#include <doctest.h>

#include <random>

using namespace hkdb;

TEST_SUITE("bits") {
  TEST_CASE("parse and print round trip") {
    auto b = BitString::parse("0110");
    CHECK(b.size() == 4);
    CHECK(b.to_string() == "0110");
    CHECK_FALSE(b.bit(1));
    CHECK(b.bit(2));
    CHECK(b.to_uint() == 6);
    CHECK_THROWS_AS(BitString::parse("01a"), std::invalid_argument);
  }

  TEST_CASE("from_uint puts the most significant bit first") {
    CHECK(BitString::from_uint(1, 3).to_string() == "001");
    CHECK(BitString::from_uint(6, 3).to_string() == "110");
    CHECK(BitString::ones(3).to_uint() == 7);
    CHECK(BitString::zeros(2).to_string() == "00");
  }

  TEST_CASE("indexing is one-based and checked") {
    auto b = BitString::parse("10");
    CHECK(b.bit(1));
    CHECK_THROWS(b.bit(0));
    CHECK_THROWS(b.bit(3));
  }

  TEST_CASE("slice, concat, prefix") {
    auto b = BitString::parse("110010");
    CHECK(b.slice(2, 3).to_string() == "100");
    CHECK(concat(BitString::parse("1"), BitString::parse("00")).to_string() == "100");
    CHECK(is_prefix(BitString::parse("11"), b));
    CHECK_FALSE(is_prefix(BitString::parse("10"), b));
  }

  TEST_CASE("hamming distance counts differing positions") {
    for (std::uint64_t x = 0; x < 16; ++x) {
      for (std::uint64_t z = 0; z < 16; ++z) {
        unsigned want = static_cast<unsigned>(__builtin_popcountll(x ^ z));
        CHECK(hamming_distance(BitString::from_uint(x, 4), BitString::from_uint(z, 4)) == want);
      }
    }
    CHECK_THROWS(hamming_distance(BitString::parse("1"), BitString::parse("10")));
  }

  TEST_CASE("negate flips every bit") {
    CHECK(negate(BitString::parse("0110")).to_string() == "1001");
    CHECK(negate(negate(BitString::parse("101"))) == BitString::parse("101"));
  }

  TEST_CASE("mask stars the chosen positions") {
    auto m = mask(BitString::parse("1011"), IndexSet(4, {2, 4}));
    CHECK(m.to_string() == "1*1*");
    CHECK(m.masked_positions() == IndexSet(4, {2, 4}));
    CHECK(MaskedBitString::parse("1*1*") == m);
  }

  TEST_CASE("index set membership") {
    IndexSet s(5, {1, 3});
    CHECK(s.contains(1));
    CHECK_FALSE(s.contains(2));
    CHECK(s.size() == 2);
    CHECK(IndexSet::full(3).size() == 3);
    CHECK_THROWS(IndexSet(2, {3}));
  }

  TEST_CASE("random bit strings are reproducible") {
    std::mt19937_64 a(9), b(9);
    CHECK(BitString::random(40, a) == BitString::random(40, b));
  }
}

TEST_SUITE("rational") {
  TEST_CASE("exact probabilities") {
    auto p = ExactProb::power(Rational(3, 4), 4);
    CHECK(p.to_string() == "81/256");
    CHECK(ExactProb::pow2_neg(3).value() == Rational(1, 8));
    CHECK(ExactProb::one() * ExactProb::zero() == ExactProb::zero());
    CHECK(ExactProb(Rational(1, 3)) < ExactProb(Rational(1, 2)));
  }

  TEST_CASE("decimal rendering") {
    CHECK(to_decimal(Rational(1, 8), 4) == "0.1250");
    CHECK(ExactProb(Rational(6561, 65536)).to_decimal(7) == "0.1001129");
  }

  TEST_CASE("parsing") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("2") == Rational(2));
    CHECK(parse_rational("(3/4)^2") == Rational(9, 16));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  }
}
