#include "hkdb/hkfun.hpp"

#include "independent.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <set>

using namespace hkdb;

namespace {

ResponseToken token(std::uint64_t h0, std::uint64_t h1, unsigned ell) {
  return ResponseToken(BitString::from_uint(h0, ell), BitString::from_uint(h1, ell));
}

}  // namespace

TEST_SUITE("hkfun") {
  TEST_CASE("boxplus selects h1 where x is 1 and h0 elsewhere") {
    const unsigned ell = 3;
    for (std::uint64_t x = 0; x < 8; ++x) {
      for (std::uint64_t h0 = 0; h0 < 8; ++h0) {
        for (std::uint64_t h1 = 0; h1 < 8; ++h1) {
          CHECK(boxplus(BitString::from_uint(x, ell), token(h0, h1, ell)).to_uint() ==
                ref::boxplus(x, h0, h1, ell));
        }
      }
    }
  }

  TEST_CASE("boxplus rejects mismatched lengths") {
    CHECK_THROWS_AS(boxplus(BitString::parse("01"), token(0, 0, 3)), std::invalid_argument);
  }

  TEST_CASE("kernel is where the halves agree") {
    auto h = ResponseToken(BitString::parse("0110"), BitString::parse("0011"));
    CHECK(kernel(h) == IndexSet(4, {1, 3}));
    CHECK(kernel(token(5, 5, 3)).size() == 3);
    CHECK(kernel(token(0, 7, 3)).size() == 0);
  }

  TEST_CASE("kernel bits do not depend on the challenge") {
    const unsigned ell = 3;
    for (std::uint64_t h0 = 0; h0 < 8; ++h0) {
      for (std::uint64_t h1 = 0; h1 < 8; ++h1) {
        auto h = token(h0, h1, ell);
        auto k = kernel(h);
        auto base = boxplus(BitString::zeros(ell), h);
        for (std::uint64_t x = 0; x < 8; ++x) {
          auto r = boxplus(BitString::from_uint(x, ell), h);
          for (auto i : k.members()) CHECK(r.bit(i) == base.bit(i));
        }
      }
    }
  }

  TEST_CASE("extract_token recovers h from z and its negation") {
    const unsigned ell = 3;
    for (std::uint64_t z = 0; z < 8; ++z) {
      for (std::uint64_t h0 = 0; h0 < 8; ++h0) {
        for (std::uint64_t h1 = 0; h1 < 8; ++h1) {
          auto h = token(h0, h1, ell);
          auto zb = BitString::from_uint(z, ell);
          CHECK(extract_token(zb, boxplus(zb, h), boxplus(negate(zb), h)) == h);
        }
      }
    }
  }

  TEST_CASE("token halves") {
    auto h = ResponseToken::from_bits(BitString::parse("001101"));
    CHECK(h.ell() == 3);
    CHECK(h.h0().to_string() == "001");
    CHECK(h.h1().to_string() == "101");
    CHECK(h.to_bits().to_string() == "001101");
    CHECK_THROWS(ResponseToken::from_bits(BitString::parse("101")));
  }

  TEST_CASE("bitwise functions agree with boxplus of their canonical token") {
    // Every 1-bit table with one seed bit, repeated over three blocks.
    const unsigned ell = 3;
    for (std::uint64_t code = 0; code < 16; ++code) {
      std::vector<std::uint64_t> table(4);
      for (unsigned k = 0; k < 4; ++k) table[k] = (code >> k) & 1u;
      auto f = PartitionedFunction::repeated(Block{1, 1, 1, table}, ell);
      REQUIRE(f.is_bitwise());
      auto canon = canonical_form(f);
      REQUIRE(canon.size() == 8);
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto sb = BitString::from_uint(seed, ell);
        auto f0 = eval_partitioned(f, sb, BitString::zeros(ell));
        auto f1 = eval_partitioned(f, sb, BitString::ones(ell));
        CHECK(canon[seed] == ResponseToken(f0, f1));
        for (std::uint64_t x = 0; x < 8; ++x) {
          auto xb = BitString::from_uint(x, ell);
          CHECK(eval_partitioned(f, sb, xb) == boxplus(xb, ResponseToken(f0, f1)));
        }
      }
    }
  }

  TEST_CASE("uniform token function realizes every token once") {
    for (unsigned ell = 1; ell <= 4; ++ell) {
      auto f = PartitionedFunction::uniform_token(ell);
      CHECK(f.seed_width() == 2 * ell);
      auto canon = canonical_form(f);
      std::set<std::string> seen;
      for (const auto& t : canon) seen.insert(t.to_string());
      CHECK(seen.size() == (std::size_t{1} << (2 * ell)));
    }
  }

  TEST_CASE("standard functions") {
    auto x = BitString::parse("1010");
    CHECK(eval_partitioned(PartitionedFunction::identity(4), {}, x) == x);
    CHECK(eval_partitioned(PartitionedFunction::negation(4), {}, x) == negate(x));
    auto c = BitString::parse("0111");
    CHECK(eval_partitioned(PartitionedFunction::constant(c), {}, x) == c);
    CHECK(eval_partitioned(PartitionedFunction::xor_with_seed(4), BitString::parse("1100"), x).to_string() == "0110");
  }

  TEST_CASE("non-bitwise functions have no canonical form") {
    PartitionedFunction f({Block{2, 1, 0, {0, 1, 1, 0}}});
    CHECK_FALSE(f.is_bitwise());
    CHECK_THROWS_AS(canonical_form(f), std::invalid_argument);
  }

  TEST_CASE("malformed blocks are rejected") {
    CHECK_THROWS(PartitionedFunction({Block{1, 1, 1, {0, 1}}}));
    CHECK_THROWS(PartitionedFunction({Block{1, 1, 0, {0, 2}}}));
  }

  TEST_CASE("json round trip") {
    auto f = PartitionedFunction::uniform_token(2);
    auto g = partitioned_from_json(to_json(f));
    CHECK(g.seed_width() == f.seed_width());
    CHECK(canonical_form(g) == canonical_form(f));
  }
}
