#include "hkdb/protocol.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

using namespace hkdb;
using namespace hkdb::protocol;

TEST_SUITE("protocol") {
  TEST_CASE("configuration invariants") {
    ProtocolConfig c;
    CHECK_NOTHROW(c.validate());
    c.ell = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.velocity = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.distance_bound = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.positions.erase("P");
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }

  TEST_CASE("lint flags short secrets and disabled freshness") {
    ProtocolConfig c;
    CHECK(c.lint().empty());
    c.secret_bits = c.ell;
    CHECK(c.lint().size() == 1);
    c.enforce_freshness = false;
    CHECK(c.lint().size() == 2);
  }

  TEST_CASE("timing") {
    ProtocolConfig c;
    CHECK(c.window() == 20);
    CHECK(c.delay("V", "P") == 3);
    c.velocity = 2;
    c.processing_ticks = 1;
    CHECK(c.delay("V", "P") == 2);  // ceil(3/2)
    CHECK(c.window() == 11);
  }

  TEST_CASE("config json round trip") {
    ProtocolConfig c;
    c.ell = 5;
    c.estimator = Estimator::mean;
    c.positions["P"] = 7;
    auto d = config_from_json(to_json(c));
    CHECK(d.ell == 5);
    CHECK(d.estimator == Estimator::mean);
    CHECK(d.position("P") == 7);
    CHECK_THROWS(config_from_json(nlohmann::json{{"estimator", "median"}}));
    CHECK_THROWS(config_from_json(nlohmann::json{{"ell", 0}}));
  }

  TEST_CASE("honest prover at distance 3") {
    ProtocolConfig c;
    auto r = run_honest_session(c, 11);
    CHECK(r.verdict.accepted);
    CHECK(r.verdict.reason == Reason::ok);
    CHECK(r.verdict.bits_correct == c.ell);
    for (auto rtt : r.verdict.per_bit_rtt) CHECK(rtt == 6);
    CHECK(r.verdict.estimated_distance == doctest::Approx(3.0));
  }

  TEST_CASE("honest completeness across positions inside the bound") {
    for (std::int64_t p = -10; p <= 10; ++p) {
      ProtocolConfig c;
      c.positions["P"] = p;
      c.processing_ticks = 2;
      CHECK(run_honest_session(c, static_cast<std::uint64_t>(p + 100)).verdict.accepted);
    }
  }

  TEST_CASE("prover beyond the bound is rejected as too far") {
    ProtocolConfig c;
    c.positions["P"] = 11;
    auto r = run_honest_session(c, 3);
    CHECK_FALSE(r.verdict.accepted);
    CHECK(r.verdict.reason == Reason::too_far);
  }

  TEST_CASE("verifier decision on a hand-built transcript") {
    ProtocolConfig c;
    c.ell = 2;
    c.distance_bound = 3;
    Transcript t;
    t.x = BitString::parse("10");
    t.verifier_token = ResponseToken(BitString::parse("00"), BitString::parse("11"));
    t.responses = BitString::parse("10");
    t.sent_at = {0, 10};
    t.received_at = {6, 16};
    auto v = verifier_decide(t, c);
    CHECK(v.accepted);
    CHECK(v.estimated_distance == doctest::Approx(3.0));

    t.responses = BitString::parse("11");
    CHECK(verifier_decide(t, c).reason == Reason::wrong_bits);

    t.responses = BitString::parse("10");
    t.received_at = {6, -1};
    auto missing = verifier_decide(t, c);
    CHECK_FALSE(missing.accepted);
    CHECK(missing.bits_correct == 1);

    t.received_at = {6, 17};
    CHECK(verifier_decide(t, c).reason == Reason::too_far);

    t.counters_reused = true;
    CHECK(verifier_decide(t, c).reason == Reason::counter_reused);

    Transcript empty;
    CHECK_THROWS_AS(verifier_decide(empty, c), std::invalid_argument);
  }

  TEST_CASE("mean estimator") {
    ProtocolConfig c;
    c.ell = 2;
    c.estimator = Estimator::mean;
    Transcript t;
    t.x = BitString::parse("00");
    t.verifier_token = ResponseToken(BitString::parse("00"), BitString::parse("00"));
    t.responses = BitString::parse("00");
    t.sent_at = {0, 30};
    t.received_at = {0, 36};
    CHECK(verifier_decide(t, c).estimated_distance == doctest::Approx(1.5));
  }

  TEST_CASE("reused counters are rejected") {
    ProtocolConfig c;
    auto first = run_honest_session(c, 5);
    Mt19937Source entropy(5);
    World w(c, entropy);
    w.store().insert("V", first.transcript.a, first.transcript.b);
    HonestProver p;
    auto r = run_session(w, p);
    CHECK(r.transcript.counters_reused);
    CHECK(r.verdict.reason == Reason::counter_reused);
  }

  TEST_CASE("counters advance only under freshness") {
    ProtocolConfig c;
    Mt19937Source e1(1);
    World fresh(c, e1);
    CHECK(fresh.next_prover_counter() != fresh.next_prover_counter());
    auto peeked = fresh.peek_verifier_counter();
    CHECK(peeked == fresh.next_verifier_counter());
    CHECK(peeked != fresh.next_verifier_counter());
    c.enforce_freshness = false;
    Mt19937Source e2(1);
    World stale(c, e2);
    CHECK(stale.next_prover_counter() == stale.next_prover_counter());
  }

  TEST_CASE("sessions replay from their seed") {
    ProtocolConfig c;
    auto a = run_honest_session(c, 77);
    auto b = run_honest_session(c, 77);
    std::ostringstream sa, sb;
    a.transcript.write_jsonl(sa);
    b.transcript.write_jsonl(sb);
    CHECK(sa.str() == sb.str());
    CHECK_FALSE(sa.str().empty());
    CHECK(run_honest_session(c, 78).transcript.x.size() == c.ell);
  }

  TEST_CASE("events are in time order") {
    auto r = run_honest_session(ProtocolConfig{}, 9);
    for (std::size_t i = 1; i < r.transcript.events.size(); ++i) {
      CHECK(r.transcript.events[i - 1].tick <= r.transcript.events[i].tick);
    }
  }

  TEST_CASE("random oracle is memoized and unbiased") {
    Mt19937Source e(3);
    RandomOracle o(e, 8);
    auto in = BitString::parse("1011");
    auto out = o.query(in);
    CHECK(o.query(in) == out);
    CHECK(o.table_size() == 1);

    // Keyed oracle: ones among 64 * 4096 output bits, within 5 standard deviations.
    const double n = 64.0 * 4096;
    double ones = 0;
    for (std::uint64_t i = 0; i < 4096; ++i) {
      auto v = random_oracle(42, BitString::from_uint(i, 16), 64);
      for (std::size_t k = 1; k <= 64; ++k) ones += v.bit(k);
    }
    CHECK(std::abs(ones - n / 2) < 5 * std::sqrt(n / 4));
    CHECK(random_oracle(42, in, 16) == random_oracle(42, in, 16));
    CHECK(random_oracle(42, in, 16) != random_oracle(43, in, 16));
  }

  TEST_CASE("tape source") {
    TapeSource t(0b101, 3);
    CHECK(t.bit());
    CHECK_FALSE(t.bit());
    CHECK(t.bit());
    CHECK_THROWS_AS(t.bit(), TapeExhausted);
  }
}
